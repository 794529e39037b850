#pragma once

#include <string>

#include "zerogap/coefficients.hpp"

namespace zerogap {

// SHA-1 of "blob <size>\0" + data, hex encoded (the object id git assigns to a file).
std::string content_hash(const std::string& data);

// Hash of a canonical text rendering of the table (exact tau when present).
std::string table_hash(const CoefficientTable& tbl);

// $ZEROGAP_CACHE_DIR, else ./.zerogap-cache. Created on demand.
std::string cache_directory();

}  // namespace zerogap
