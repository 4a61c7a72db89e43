#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace semdrift {

/// Data files compiled into the library, addressable by short name
/// ("swadesh", "pereira", "gold_17_sentences", "gold_20_words",
/// "sample_clusters").
std::optional<std::string_view> bundled_resource(std::string_view name);

std::vector<std::string_view> bundled_names();

}  // namespace semdrift
