// Copyright 2026 The Votechain Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "chain/block.hpp"
#include "chain/election.hpp"
#include "chain/transaction.hpp"
#include "common/json.hpp"

namespace votechain {

Json transaction_to_json(const Transaction& tx);
Transaction transaction_from_json(const Json& j);

Json election_to_json(const ElectionConfig& cfg);
ElectionConfig election_from_json(const Json& j);

// Public block view: header fields plus transactions, no quorum signature
// bytes beyond node ids.
Json block_to_json(const Block& block);

}  // namespace votechain
