#include "logfrob/gallery.hpp"

#include "logfrob/error.hpp"

namespace logfrob {

namespace {

// fans used by several entries
const char* kP1 = R"({"rays": [[1], [-1]], "max_cones": [[0], [1]]})";
const char* kP2 =
    R"({"rays": [[1,0], [0,1], [-1,-1]], "max_cones": [[0,1], [1,2], [0,2]]})";
const char* kP1xP1 =
    R"({"rays": [[1,0], [-1,0], [0,1], [0,-1]],
        "max_cones": [[0,2], [0,3], [1,2], [1,3]]})";
const char* kHirzebruch1 =
    R"({"rays": [[1,0], [0,1], [-1,1], [0,-1]],
        "max_cones": [[0,1], [1,2], [2,3], [0,3]]})";

Json make(const char* fan, int p, std::vector<int> divisor,
          Json extra = Json::object())
{
    Json j;
    j["p"] = p;
    j["fan"] = Json::parse(fan);
    j["divisor_rays"] = divisor;
    for (auto& [k, v] : extra.items())
        j[k] = v;
    return j;
}

} // namespace

std::vector<std::string> gallery_ids()
{
    return {"gm_p5",          "p1_p5_noD",      "p2_p5_d0",
            "p2_p5_d1",       "p2_p5_d2",       "p2_p5_d3",
            "p1xp1_p5_dnone", "p1xp1_p5_dfiber", "p1xp1_p5_dfull",
            "hirzebruch1_p5", "p1xp1_p2",       "p2_vanishing_p5",
            "proj_functoriality_p5"};
}

bool gallery_has(const std::string& id)
{
    for (const auto& x : gallery_ids())
        if (x == id)
            return true;
    return false;
}

Json gallery_spec_json(const std::string& id)
{
    if (id == "gm_p5") {
        // the torus inside the line: canonical lift, every check
        Json extra;
        extra["checks"] = {"all"};
        return make(kP1, 5, {0, 1}, extra);
    }
    if (id == "p1_p5_noD")
        return make(kP1, 5, {});
    if (id == "p2_p5_d0")
        return make(kP2, 5, {});
    if (id == "p2_p5_d1")
        return make(kP2, 5, {0});
    if (id == "p2_p5_d2")
        return make(kP2, 5, {0, 1});
    if (id == "p2_p5_d3")
        return make(kP2, 5, {0, 1, 2});
    if (id == "p1xp1_p5_dnone")
        return make(kP1xP1, 5, {});
    if (id == "p1xp1_p5_dfiber")
        return make(kP1xP1, 5, {0});
    if (id == "p1xp1_p5_dfull")
        return make(kP1xP1, 5, {0, 1, 2, 3});
    if (id == "hirzebruch1_p5")
        return make(kHirzebruch1, 5, {0, 1, 2, 3});
    if (id == "p1xp1_p2") {
        // the truncation case: dimension equals the prime
        Json extra;
        extra["checks"] = {"shell-audit", "cohomology",     "residue",
                           "truncation",  "splitting-laws", "homotopy"};
        return make(kP1xP1, 2, {0, 1, 2, 3}, extra);
    }
    if (id == "p2_vanishing_p5") {
        Json extra;
        extra["twist"] = {1, 0, 0};
        extra["checks"] = {"shell-audit", "vanishing"};
        return make(kP2, 5, {0, 1, 2}, extra);
    }
    if (id == "proj_functoriality_p5") {
        Json extra;
        Json morphism;
        morphism["lattice_map"] = {{1, 0}};
        morphism["target"]["fan"] = Json::parse(kP1);
        morphism["target"]["divisor_rays"] = {0, 1};
        extra["morphism"] = morphism;
        extra["checks"] = {"shell-audit", "homotopy", "functoriality"};
        return make(kP1xP1, 5, {0, 1, 2, 3}, extra);
    }
    fail("SpecParseError", "unknown gallery id: " + id);
}

} // namespace logfrob
