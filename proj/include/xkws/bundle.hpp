#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xkws/dataguide.hpp"
#include "xkws/inverted_index.hpp"
#include "xkws/xml_store.hpp"

namespace xkws {

inline constexpr std::uint32_t kBundleVersion = 1;

/// Everything a query needs: the instance tree, its DataGuide+ and both inverted indexes.
struct IndexBundle {
    InstanceTree tree;
    DataGuidePlus dataguide;
    SchemaIndex schema_index;
    InstanceIndex instance_index;
};

IndexBundle build_bundle(InstanceTree tree);

/// Binary `.tsix` encoding; see docs/bundle-format.md for the record layout.
std::vector<std::uint8_t> serialize_bundle(const IndexBundle& bundle);
IndexBundle deserialize_bundle(const std::vector<std::uint8_t>& bytes);

void save_bundle(const IndexBundle& bundle, const std::filesystem::path& path);
IndexBundle load_bundle(const std::filesystem::path& path);

}  // namespace xkws
