// Built-in example specs: the curated desk-scale geometries the verifier
// ships with.

#ifndef LOGFROB_GALLERY_HPP
#define LOGFROB_GALLERY_HPP

#include <string>
#include <vector>

#include "logfrob/pipeline.hpp"

namespace logfrob {

std::vector<std::string> gallery_ids();
bool gallery_has(const std::string& id);
Json gallery_spec_json(const std::string& id); // SpecParseError when unknown

} // namespace logfrob

#endif
