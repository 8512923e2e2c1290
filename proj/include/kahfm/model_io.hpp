#pragma once

#include <string>

#include "kahfm/core.hpp"
#include "kahfm/ingest.hpp"

namespace kahfm {

struct ModelMeta {
    FeatureTable table;
    std::vector<std::string> userIds;
    std::vector<std::string> itemIds;
    std::string fingerprint;  // run configuration, flat key=value lines
};

/// Versioned container: a text header (magic, version, n, k, counts)
/// followed by little-endian 64-bit floats for w0, w and row-major V,
/// then the feature and index tables as length-prefixed UTF-8.
void save_model(const FMParams& params, const ModelMeta& meta, const std::string& path);

struct LoadedModel {
    FMParams params;
    ModelMeta meta;
};

/// Truncated or mismatched files raise an error naming the byte offset.
LoadedModel load_model(const std::string& path);

}  // namespace kahfm
