#pragma once

// JSON file formats.  All field elements are decimal coefficient strings
// ("3" over F_p, "3,0,1" over F_{p^3}) so files are exact and portable.
// Point files carry a "format" tag and embed their context.

#include <fstream>
#include <memory>

#include <json.hpp>

#include "isogeny.hpp"
#include "velu.hpp"

namespace theta {

using json = nlohmann::json;

inline json field_context_json(const FieldContext& F) {
    json j;
    j["p"] = F.p();
    j["d"] = F.d();
    j["modulus_poly"] = F.modulus_poly();
    return j;
}

inline json theta_context_json(const ThetaContext& ctx) {
    json j;
    j["g"] = ctx.g();
    j["n"] = ctx.n();
    j["ell"] = ctx.ell();
    j["field"] = field_context_json(*ctx.field());
    return j;
}

inline json point_json(const AffineThetaPoint& x) {
    json j;
    j["format"] = "theta-point/1";
    j["level"] = x.level();
    j["g"] = x.g();
    json coords = json::array();
    for (size_t k = 0; k < x.size(); ++k) coords.push_back(x[k].str());
    j["coords"] = coords;
    j["context"] = theta_context_json(*x.ctx());
    return j;
}

inline json compressed_json(const CompressedPoint& cp, const ThetaContext& ctx) {
    json j;
    j["format"] = "theta-compressed/1";
    json basis = json::array();
    for (const auto& b : cp.basis) {
        json v = json::array();
        for (int k = 0; k < b.g(); ++k) v.push_back(b[k]);
        basis.push_back(v);
    }
    j["basis"] = basis;
    json blocks = json::array();
    for (const auto& b : cp.blocks) blocks.push_back(point_json(b));
    j["blocks"] = blocks;
    j["context"] = theta_context_json(ctx);
    return j;
}

// Owns the contexts a loaded file needs; points reference into it.
struct LoadedContext {
    std::unique_ptr<FieldContext> field;
    std::unique_ptr<ThetaContext> theta;
};

inline void load_contexts(const json& cj, LoadedContext& out) {
    const json& fj = cj.at("field");
    std::vector<u64> poly;
    for (const auto& c : fj.at("modulus_poly")) poly.push_back(c.get<u64>());
    out.field = std::make_unique<FieldContext>(fj.at("p").get<u64>(), fj.at("d").get<unsigned>(), poly);
    out.theta = std::make_unique<ThetaContext>(cj.at("g").get<int>(), cj.at("n").get<int>(),
                                               cj.at("ell").get<int>(), out.field.get());
}

inline AffineThetaPoint point_from_json(const json& j, const ThetaContext& ctx) {
    if (j.at("format").get<std::string>() != "theta-point/1")
        fail(errc::bad_input, "unknown point format tag");
    int level = j.at("level").get<int>();
    int g = j.at("g").get<int>();
    if (g != ctx.g()) fail(errc::bad_input, "dimension mismatch");
    std::vector<FieldElement> coords;
    for (const auto& c : j.at("coords")) coords.push_back(ctx.field()->parse(c.get<std::string>()));
    return AffineThetaPoint(&ctx, level, std::move(coords));
}

inline AffineThetaPoint load_point(const std::string& path, LoadedContext& lc) {
    std::ifstream in(path);
    if (!in) fail(errc::bad_input, "cannot open " + path);
    json j = json::parse(in);
    load_contexts(j.at("context"), lc);
    return point_from_json(j, *lc.theta);
}

inline CompressedPoint compressed_from_json(const json& j, const ThetaContext& ctx) {
    if (j.at("format").get<std::string>() != "theta-compressed/1")
        fail(errc::bad_input, "unknown compressed format tag");
    CompressedPoint cp;
    for (const auto& b : j.at("basis")) {
        IndexVector v(ctx.g(), ctx.ell());
        for (int k = 0; k < ctx.g(); ++k) v.set(k, b.at(k).get<long long>());
        cp.basis.push_back(v);
    }
    for (const auto& b : j.at("blocks")) cp.blocks.push_back(point_from_json(b, ctx));
    return cp;
}

inline json kernel_spec_json(const KernelSpec& ks, const ThetaContext& ctx) {
    json j;
    j["format"] = "theta-kernel/1";
    json basis = json::array();
    for (const auto& b : ks.basis) basis.push_back(point_json(b));
    j["basis"] = basis;
    json sums = json::array();
    for (const auto& [ij, pt] : ks.sums) {
        json s;
        s["i"] = ij.first;
        s["j"] = ij.second;
        s["point"] = point_json(pt);
        sums.push_back(s);
    }
    j["sums"] = sums;
    j["context"] = theta_context_json(ctx);
    return j;
}

inline KernelSpec kernel_spec_from_json(const json& j, const ThetaContext& ctx) {
    if (j.at("format").get<std::string>() != "theta-kernel/1")
        fail(errc::bad_input, "unknown kernel format tag");
    KernelSpec ks;
    for (const auto& b : j.at("basis")) ks.basis.push_back(point_from_json(b, ctx));
    for (const auto& s : j.at("sums"))
        ks.sums[{s.at("i").get<int>(), s.at("j").get<int>()}] = point_from_json(s.at("point"), ctx);
    return ks;
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(errc::bad_input, "cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace theta
