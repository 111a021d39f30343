#include "ellspin/result_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ellspin {

namespace {

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<json> cplx_array(const std::vector<cplx>& v) {
    std::vector<json> out;
    out.reserve(v.size());
    for (const cplx& z : v) out.push_back(cplx_json(z));
    return out;
}

}  // namespace

void RunConfig::validate() const {
    if (N < 3 || N > 16)
        throw ConfigError("config: N must be in [3, 16]");
    if (M < 0 || M > 5 || M > N)
        throw ConfigError("config: M must be in [0, 5] and at most N");
    if (!(alpha >= 0.05 && alpha <= 32.0))
        throw ConfigError("config: alpha outside the supported [0.05, 32]");
    if (!(std::abs(J) <= 100.0) || J == 0.0)
        throw ConfigError("config: J must be nonzero with |J| <= 100");
    if (!(tol >= 1e-14 && tol <= 1e-2))
        throw ConfigError("config: tol outside [1e-14, 1e-2]");
    if (!(match_tol >= 1e-12 && match_tol <= 1e-1))
        throw ConfigError("config: match tolerance outside [1e-12, 1e-1]");
    if (continuation_steps < 1 || continuation_steps > 100)
        throw ConfigError("config: continuation steps outside [1, 100]");
    for (double a : alpha_grid)
        if (!(a >= 0.05 && a <= 32.0))
            throw ConfigError("config: alpha grid entry outside [0.05, 32]");
    if (l_range != "default" && l_range.rfind("custom:", 0) != 0)
        throw ConfigError("config: l-range must be 'default' or 'custom:...'");
    (void)parsed_l_range();
}

std::vector<int> RunConfig::parsed_l_range() const {
    std::vector<int> range;
    if (l_range == "default") {
        for (int l = 0; l < N; ++l) range.push_back(l);
        return range;
    }
    const std::string body = l_range.substr(std::string("custom:").size());
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("config: bad l-range entry '" + item + "'");
        }
        if (used != item.size())
            throw ConfigError("config: bad l-range entry '" + item + "'");
        if (v < -64 || v > 64)
            throw ConfigError("config: l-range entry outside [-64, 64]");
        range.push_back(v);
    }
    if (range.empty()) throw ConfigError("config: empty l-range");
    return range;
}

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["n"] = c.N;
    j["m"] = c.M;
    j["alpha"] = c.alpha;
    j["j"] = c.J;
    j["verify"] = c.verify;
    j["l_range"] = c.l_range;
    j["tol"] = c.tol;
    j["match_tol"] = c.match_tol;
    j["continuation_steps"] = c.continuation_steps;
    j["alpha_grid"] = c.alpha_grid;
    return j;
}

json to_json(const SpectrumRecord& rec) {
    json j;
    j["m_sector"] = rec.M;
    j["provenance"] = rec.provenance;
    j["eigenvalues"] = rec.eigenvalues;
    j["momentum_labels"] = rec.momentum_labels;
    j["residuals"] = rec.residuals;
    return j;
}

json to_json(const BetheRoots& roots) {
    json j;
    j["l"] = roots.quantum_numbers.l;
    j["p"] = cplx_array(roots.p);
    j["t"] = cplx_array(roots.t);
    j["q"] = cplx_array(roots.q);
    j["q_tilde"] = cplx_array(roots.q_tilde);
    j["f"] = cplx_array(roots.f);
    j["eps"] = cplx_array(roots.eps);
    j["residual_norm"] = roots.residual_norm;
    j["iterations"] = roots.iterations;
    j["converged"] = roots.converged;
    j["E_continuum"] = cplx_json(roots.energies.E_sf);
    j["calE_lattice"] = cplx_json(roots.energies.calE);
    if (std::isfinite(roots.energies.E_M)) j["E_spin"] = roots.energies.E_M;
    return j;
}

json to_json(const MatchReport& rep) {
    json j;
    j["m_sector"] = rep.M;
    j["l_range"] = rep.l_range;
    j["tuples_attempted"] = rep.tuples_attempted;
    j["converged"] = rep.converged;
    j["quarantined"] = rep.quarantined;
    j["duplicates"] = rep.duplicates;
    j["hw_levels"] = rep.hw_levels;
    j["hw_matched"] = rep.hw_matched;
    j["hw_fraction"] = rep.hw_fraction;
    j["max_deviation"] = rep.max_deviation;
    j["unmatched_hw_levels"] = rep.unmatched_hw_levels;
    j["ed_eigenvalues"] = rep.ed_eigenvalues;
    std::vector<json> roots;
    for (const auto& rs : rep.roots) {
        json r;
        r["status"] = rs.status;
        if (!rs.detail.empty()) r["detail"] = rs.detail;
        r["momentum"] = rs.momentum;
        r["l"] = rs.roots.quantum_numbers.l;
        if (rs.status == "ok") {
            r["root"] = to_json(rs.roots);
            r["matched_level"] = rs.matched_level;
            if (rs.matched_level >= 0) r["deviation"] = rs.deviation;
        }
        roots.push_back(std::move(r));
    }
    j["roots"] = std::move(roots);
    return j;
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

void write_document_atomic(const json& doc, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("write: cannot open " + tmp);
        os << dump_document(doc);
        if (!os) throw Error("write: failed writing " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("write: cannot rename into " + path);
}

json read_document(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("read: cannot open " + path);
    json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw Error(std::string("read: parse failure: ") + e.what());
    }
    return j;
}

}  // namespace ellspin
