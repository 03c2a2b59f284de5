#include "acslab/io.hpp"

#include "acslab/scalar_parse.hpp"

#include <filesystem>
#include <fstream>

namespace acslab {

namespace {

std::string str(const Json& j, const char* what) {
    if (!j.is_string()) throw IoError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

int integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw IoError(std::string(what) + " must be an integer");
    return j.get<int>();
}

GMat gaussianMatrix(const Json& j, const char* what) {
    if (!j.is_array()) throw IoError(std::string(what) + " must be a matrix of strings");
    GMat m;
    for (const Json& row : j) {
        if (!row.is_array()) throw IoError(std::string(what) + " must be a matrix of strings");
        GRow r;
        for (const Json& e : row) r.push_back(parseGaussian(str(e, what)));
        m.push_back(std::move(r));
    }
    return m;
}

Json renderMatrix(const GMat& m) {
    Json rows = Json::array();
    for (const GRow& r : m) {
        Json row = Json::array();
        for (const GaussianRational& g : r) row.push_back(render(g));
        rows.push_back(std::move(row));
    }
    return rows;
}

FramedModel lieAlgebraFromJson(const Json& j) {
    int n = integer(j.at("n"), "n");
    std::vector<BracketEntry> brackets;
    if (j.count("brackets"))
        for (const Json& b : j.at("brackets")) {
            BracketEntry e;
            e.i = integer(b.at("i"), "bracket index i");
            e.j = integer(b.at("j"), "bracket index j");
            for (auto& [k, v] : b.at("out").items()) {
                try {
                    e.out[std::stoi(k)] = parseGaussian(str(v, "bracket coefficient"));
                } catch (const std::invalid_argument&) {
                    throw IoError("bracket output key '" + k + "' is not a frame index");
                } catch (const std::out_of_range&) {
                    throw IoError("bracket output key '" + k + "' is not a frame index");
                }
            }
            brackets.push_back(std::move(e));
        }
    GMat J = gaussianMatrix(j.at("J"), "J");
    return fromLieAlgebra(2 * n, brackets, J, "lie_algebra(file)");
}

FramedModel coordinateFromJson(const Json& j) {
    int n = integer(j.at("n"), "n");
    if (n < 1) throw IoError("coordinate model needs n >= 1");
    FramedModel md;
    auto ge = std::make_shared<GenEnv>();
    if (j.count("oscillators"))
        for (const Json& o : j.at("oscillators")) ge->osc.push_back(str(o.at("name"), "oscillator name"));
    if (j.count("parameters"))
        for (const Json& p : j.at("parameters")) ge->par.push_back(str(p.at("name"), "parameter name"));
    md.env = ge;
    md.n = n;
    md.kind = FrameKind::ComplexPaired;
    md.origin = "coordinate(file)";
    int d = 2 * n;
    for (int k = 1; k <= n; ++k) md.backNames.push_back("dz" + std::to_string(k));
    for (int k = 1; k <= n; ++k) md.backNames.push_back("dzb" + std::to_string(k));
    md.dBack.assign(size_t(d), MaskForm(md.env, d));
    md.dirOsc.assign(size_t(d),
                     std::vector<OscillatorElement>(ge->osc.size(), OscillatorElement(md.env)));
    if (j.count("oscillators")) {
        size_t s = 0;
        for (const Json& o : j.at("oscillators")) {
            if (o.count("derivations"))
                for (auto& [name, expr] : o.at("derivations").items()) {
                    auto it = std::find(md.backNames.begin(), md.backNames.end(), name);
                    if (it == md.backNames.end())
                        throw IoError("derivation direction '" + name + "' is not a coframe name");
                    size_t a = size_t(it - md.backNames.begin());
                    md.dirOsc[a][s] = parsePoly(md.env, str(expr, "derivation"));
                }
            ++s;
        }
    }
    if (j.count("parameters"))
        for (const Json& p : j.at("parameters"))
            md.paramValues.push_back(p.count("value") ? parseGaussian(str(p.at("value"), "parameter value"))
                                                      : GaussianRational(0));
    const Json& cf = j.at("coframe");
    if (!cf.is_array() || int(cf.size()) != n)
        throw IoError("coframe must list " + std::to_string(n) + " rows");
    for (const Json& row : cf) {
        if (!row.is_array() || int(row.size()) != d)
            throw IoError("each coframe row must list " + std::to_string(d) + " coefficients");
        SRow r;
        for (const Json& e : row) r.push_back(parseFraction(md.env, str(e, "coframe entry")));
        md.coframe.push_back(std::move(r));
    }
    md.finalize();
    return md;
}

FramedModel builtinFromJson(const Json& j) {
    std::string name = str(j.at("name"), "builtin name");
    if (name == "torus_mni") {
        int n = integer(j.at("n"), "n");
        GaussianRational A = j.count("A") ? parseGaussian(str(j.at("A"), "A")) : GaussianRational(2);
        return torusMni(n, A);
    }
    if (name == "c2_example") return c2Example(j.count("f") ? str(j.at("f"), "f") : "u1");
    if (name == "torus_flat") {
        int n = integer(j.at("n"), "n");
        if (n < 1) throw IoError("torus_flat needs n >= 1");
        Json c{{"kind", "coordinate"}, {"n", n}};
        Json rows = Json::array();
        for (int i = 0; i < n; ++i) {
            Json row = Json::array();
            for (int a = 0; a < 2 * n; ++a) row.push_back(a == i ? "1" : "0");
            rows.push_back(std::move(row));
        }
        c["coframe"] = std::move(rows);
        FramedModel md = coordinateFromJson(c);
        md.origin = "torus_flat(" + std::to_string(n) + ")";
        return md;
    }
    if (name == "t6_rank2") return t6Rank2();
    if (name == "mapping_torus_s1s3") return mappingTorusS1S3(integer(j.at("m"), "m"));
    if (name == "abelian") {
        int n = integer(j.at("n"), "n");
        GMat J = j.count("J") ? gaussianMatrix(j.at("J"), "J") : standardJ(2 * n);
        return abelianModel(J, "abelian(" + std::to_string(n) + ")");
    }
    if (name == "kodaira_thurston") {
        int which = j.count("which") ? integer(j.at("which"), "which") : 1;
        GMat J(4, GRow(4, GaussianRational(0)));
        if (which == 1) {
            J[2][0] = GaussianRational(1); J[0][2] = GaussianRational(-1);
            J[3][1] = GaussianRational(1); J[1][3] = GaussianRational(-1);
        } else if (which == 2) {
            J[1][0] = GaussianRational(1); J[0][1] = GaussianRational(-1);
            J[3][2] = GaussianRational(1); J[2][3] = GaussianRational(-1);
        } else {
            throw IoError("kodaira_thurston: which must be 1 or 2");
        }
        return fromLieAlgebra(4, {{1, 2, {{4, GaussianRational(-1)}}}}, J,
                              "kodaira_thurston(" + std::to_string(which) + ")");
    }
    throw IoError("unknown builtin model '" + name + "'");
}

}  // namespace

std::string bidegreeKey(int p, int q) {
    return std::to_string(p) + "," + std::to_string(q);
}

Bidegree parseBidegreeKey(const std::string& s) {
    size_t c = s.find(',');
    if (c == std::string::npos) throw IoError("bidegree key '" + s + "' is not of the form p,q");
    try {
        size_t usedP = 0, usedQ = 0;
        int p = std::stoi(s.substr(0, c), &usedP);
        int q = std::stoi(s.substr(c + 1), &usedQ);
        if (usedP != c || usedQ != s.size() - c - 1)
            throw IoError("bidegree key '" + s + "' is not of the form p,q");
        return {p, q};
    } catch (const std::invalid_argument&) {
        throw IoError("bidegree key '" + s + "' is not of the form p,q");
    } catch (const std::out_of_range&) {
        throw IoError("bidegree key '" + s + "' is out of range");
    }
}

FramedModel modelFromJson(const Json& j, const std::string& baseDir, int depth) {
    if (depth > 16) throw IoError("model files nest too deeply");
    if (!j.is_object() || !j.count("kind")) throw IoError("model file needs a 'kind' field");
    std::string kind = str(j.at("kind"), "kind");
    try {
        if (kind == "lie_algebra") return lieAlgebraFromJson(j);
        if (kind == "coordinate") return coordinateFromJson(j);
        if (kind == "builtin") return builtinFromJson(j);
        if (kind == "product") {
            const Json& f = j.at("factors");
            if (!f.is_array() || f.size() < 2) throw IoError("product needs at least two factors");
            FramedModel acc = loadModel((std::filesystem::path(baseDir) / str(f[0], "factor")).string(),
                                        depth + 1);
            for (size_t k = 1; k < f.size(); ++k)
                acc = productModel(
                    acc, loadModel((std::filesystem::path(baseDir) / str(f[k], "factor")).string(),
                                   depth + 1));
            return acc;
        }
    } catch (const Json::exception& e) {
        throw IoError(std::string("model schema: ") + e.what());
    }
    throw IoError("unknown model kind '" + kind + "'");
}

FramedModel loadModel(const std::string& path, int depth) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
    return modelFromJson(j, std::filesystem::path(path).parent_path().string(), depth);
}

FourComplex fourComplexFromJson(const Json& j) {
    FourComplex A;
    try {
        if (!j.is_object() || !j.count("dims"))
            throw IoError("4-complex file needs a 'dims' object");
        for (auto& [k, v] : j.at("dims").items())
            A.dims[parseBidegreeKey(k)] = integer(v, "dimension");
        for (Diff d : {Diff::Mubar, Diff::Dbar, Diff::Del, Diff::Mu})
            if (j.count(diffName(d)))
                for (auto& [k, v] : j.at(diffName(d)).items())
                    A.diffs[size_t(d)][parseBidegreeKey(k)] = gaussianMatrix(v, diffName(d));
    } catch (const Json::exception& e) {
        throw IoError(std::string("4-complex schema: ") + e.what());
    }
    A.validate();
    return A;
}

Json fourComplexToJson(const FourComplex& A) {
    Json j;
    Json dims = Json::object();
    for (auto& [pq, d] : A.dims) dims[bidegreeKey(pq.first, pq.second)] = d;
    j["dims"] = std::move(dims);
    for (Diff d : {Diff::Mubar, Diff::Dbar, Diff::Del, Diff::Mu}) {
        if (A.diffs[size_t(d)].empty()) continue;
        Json maps = Json::object();
        for (auto& [pq, m] : A.diffs[size_t(d)])
            maps[bidegreeKey(pq.first, pq.second)] = renderMatrix(m);
        j[diffName(d)] = std::move(maps);
    }
    return j;
}

FourComplex loadFourComplex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
    return fourComplexFromJson(j);
}

FourComplex loadAnyComplex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
    if (j.is_object() && j.count("kind"))
        return fromLeftInvariant(
            modelFromJson(j, std::filesystem::path(path).parent_path().string(), 0));
    return fourComplexFromJson(j);
}

Json tableToJson(const CohomologyTable& t) {
    Json table = Json::object();
    for (auto& [pq, d] : t.table) table[bidegreeKey(pq.first, pq.second)] = d;
    return Json{{"theory", t.theory}, {"table", std::move(table)}};
}

Json pagesToJson(const std::vector<SpectralPage>& pages) {
    Json arr = Json::array();
    int degen = 1;
    for (const SpectralPage& p : pages) {
        Json table = Json::object();
        for (auto& [pq, d] : p.table) table[bidegreeKey(pq.first, pq.second)] = d;
        arr.push_back(Json{{"r", p.r}, {"table", std::move(table)}});
        degen = p.degenerateFrom;
    }
    return Json{{"theory", "frolicher"}, {"pages", std::move(arr)}, {"degenerate_from", degen}};
}

Json rankReportToJson(const RankReport& r) {
    Json witness = Json::object();
    for (auto& [name, turn] : r.witness) witness[name] = render(turn);
    return Json{{"model", r.model},
                {"generic_rank", r.genericRank},
                {"max_rank", r.maxRank},
                {"grid_size", r.gridSize},
                {"sampled_min_rank", r.sampledMinRank},
                {"witness", std::move(witness)},
                {"certified", r.certificate.certified},
                {"certificate", r.certificate.detail},
                {"classification", r.classification}};
}

Json relationReportToJson(const RelationReport& r) {
    Json j{{"ok", r.ok}};
    if (!r.ok) {
        j["violated"] = r.violated;
        j["at"] = bidegreeKey(r.at.first, r.at.second);
    }
    return j;
}

Json diagramReportToJson(const DiagramReport& r) {
    return Json{{"commutes", r.commutes},
                {"iso_bc_dol", r.isoBcDol},
                {"iso_bc_dolbar", r.isoBcDolbar},
                {"iso_bc_derham", r.isoBcDr},
                {"iso_dol_aeppli", r.isoDolA},
                {"iso_dolbar_aeppli", r.isoDolbarA},
                {"iso_derham_aeppli", r.isoDrA},
                {"ddbar_property", r.ddbarProperty},
                {"detail", r.detail}};
}

Json dim6ToJson(const Dim6Report& r) {
    return Json{{"c1_cubed_zero", r.c1CubedZero},
                {"c1_c2_zero", r.c1c2Zero},
                {"pass", r.pass()},
                {"note", r.note}};
}

Json dim8ToJson(const Dim8Report& r) {
    return Json{{"check1", r.check1},
                {"check2", r.check2},
                {"derived_c4", r.derivedC4},
                {"sigma", render(r.sigma)},
                {"sigma_integral", r.sigmaIntegral},
                {"chi_div6", r.chiDiv6},
                {"pass", r.pass()}};
}

Json classifyToJson(const ClassifyVerdict& v) {
    Json j{{"cond_c", v.condC}, {"case", v.caseUsed}};
    if (v.condB) j["cond_b"] = *v.condB;
    return j;
}

Json codimToJson(const CodimResult& r) {
    return Json{{"codim", r.codim.str()},
                {"margin", render(r.margin)},
                {"margin_positive", r.marginPositive}};
}

Json jetsToJson(const JetResult& r) {
    return Json{{"k", r.k}, {"lhs", r.lhs.str()}, {"rhs", r.rhs.str()}};
}

}  // namespace acslab
