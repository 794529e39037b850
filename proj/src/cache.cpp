#include "zerogap/cache.hpp"

#include <cstdlib>
#include <filesystem>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "zerogap/errors.hpp"

namespace zerogap {

std::string content_hash(const std::string& data) {
    std::string header = fmt::format("blob {}", data.size());
    header.push_back('\0');

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw ResourceError("content_hash: cannot allocate digest context");
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
              EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
              EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
              EVP_DigestFinal_ex(ctx, md, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw ResourceError("content_hash: digest failed");

    std::string hex;
    hex.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

std::string table_hash(const CoefficientTable& tbl) {
    std::string text = fmt::format("{} {} {}\n", tbl.name, source_tag(tbl.source), tbl.size());
    if (!tbl.tau.empty()) {
        for (int128 v : tbl.tau) {
            text += to_string(v);
            text.push_back('\n');
        }
    } else {
        // hexfloat keeps every bit
        for (const cplx& v : tbl.values) text += fmt::format("{:a} {:a}\n", v.real(), v.imag());
    }
    return content_hash(text);
}

std::string cache_directory() {
    const char* env = std::getenv("ZEROGAP_CACHE_DIR");
    std::filesystem::path dir = (env && *env) ? env : ".zerogap-cache";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CacheError(fmt::format("cannot create cache directory {}: {}", dir.string(), ec.message()));
    return dir.string();
}

}  // namespace zerogap
