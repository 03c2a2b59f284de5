#include "acslab/cli.hpp"

#include "acslab/io.hpp"
#include "acslab/scalar_parse.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace acslab {
namespace {

/* ------------------------------------------------------------- config */

RunConfig resolveBase() {
    RunConfig cfg;
    std::ifstream in("acslab.json");
    if (in) {
        try {
            Json j = Json::parse(in);
            if (j.contains("gridSize")) cfg.gridSize = j.at("gridSize").get<int>();
            if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
            if (j.contains("seed")) cfg.seed = j.at("seed").get<long>();
            if (j.contains("outputMode")) cfg.outputMode = j.at("outputMode").get<std::string>();
        } catch (const Json::exception& e) {
            throw IoError(std::string("acslab.json: ") + e.what());
        }
    }
    if (const char* g = std::getenv("ACSLAB_GRID")) {
        std::string s(g);
        try {
            size_t pos = 0;
            cfg.gridSize = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw IoError("ACSLAB_GRID must be an integer, got \"" + s + "\"");
        }
    }
    return cfg;
}

void validateConfig(const RunConfig& cfg) {
    if (cfg.gridSize < 1) throw IoError("gridSize must be >= 1");
    if (!(cfg.tolerance > 0)) throw IoError("tolerance must be positive");
    if (cfg.outputMode != "table" && cfg.outputMode != "json")
        throw IoError("outputMode must be \"table\" or \"json\"");
}

/* ------------------------------------------------------------ printing */

void emitJson(const Json& j, std::ostream& out) { out << j.dump(2) << "\n"; }

void printGrid(const std::map<Bidegree, int>& t, std::ostream& out) {
    if (t.empty()) {
        out << "  (all zero)\n";
        return;
    }
    int P = 0, Q = 0;
    size_t w = 1;
    for (const auto& e : t) {
        P = std::max(P, e.first.first);
        Q = std::max(Q, e.first.second);
        w = std::max(w, std::to_string(e.second).size());
    }
    w = std::max(w, std::to_string(P).size());
    for (int q = Q; q >= 0; --q) {
        out << "  q=" << std::setw(2) << q << " |";
        for (int p = 0; p <= P; ++p) {
            auto it = t.find({p, q});
            int v = it == t.end() ? 0 : it->second;
            out << ' ' << std::setw(int(w)) << (v == 0 ? std::string(".") : std::to_string(v));
        }
        out << '\n';
    }
    out << "       +" << std::string((w + 1) * size_t(P + 1), '-') << '\n' << "        ";
    for (int p = 0; p <= P; ++p) out << ' ' << std::setw(int(w)) << p;
    out << "  (p)\n";
}

void printTable(const CohomologyTable& t, std::ostream& out) {
    out << "theory: " << t.theory << "\n";
    if (!t.byTotal) {
        printGrid(t.table, out);
        return;
    }
    int K = 0;
    for (const auto& e : t.table) K = std::max(K, e.first.first);
    out << "  k:";
    for (int k = 0; k <= K; ++k) out << ' ' << std::setw(3) << k;
    out << "\n  b:";
    for (int k = 0; k <= K; ++k) {
        auto it = t.table.find({k, 0});
        out << ' ' << std::setw(3) << (it == t.table.end() ? 0 : it->second);
    }
    out << '\n';
}

/* -------------------------------------------------------------- verify */

int cmdVerify(const std::string& path, bool json, std::ostream& out) {
    FramedModel md = loadModel(path);
    std::vector<std::pair<std::string, std::string>> rows;
    bool ok = true;
    auto add = [&](const std::string& name, bool v) {
        rows.push_back({name, v ? "pass" : "fail"});
        ok = ok && v;
    };
    add("construction invariants", true);  /* loading runs the full validation */
    bool dd = true;
    for (int a = 0; a < md.dim(); ++a) dd = dd && md.dMask(md.dBack[size_t(a)]).isZero();
    for (int i = 1; i <= md.n; ++i) {
        dd = dd && md.dForm(md.dForm(Form::w(md.env, md.n, i))).isZero();
        dd = dd && md.dForm(md.dForm(Form::cw(md.env, md.n, i))).isZero();
    }
    for (size_t k = 0; k < md.env->osc.size(); ++k) {
        ScalarFraction f{OscillatorElement::generatorSlot(md.env, int(k))};
        dd = dd && md.dMask(md.dScalar(f)).isZero();
    }
    add("d squared vanishes", dd);
    add("nijenhuis tensor equals 4 mubar", md.checkIdentification());
    std::string violated;
    if (md.env->osc.empty() && md.env->par.empty()) {
        RelationReport rel = verifyRelations(fromLeftInvariant(md));
        add("seven differential relations", rel.ok);
        violated = rel.violated;
    } else {
        rows.push_back({"seven differential relations", "skipped (non-invariant coefficients)"});
    }
    if (json) {
        Json j;
        j["model"] = md.origin;
        j["ok"] = ok;
        for (const auto& r : rows) j["checks"][r.first] = r.second;
        if (!violated.empty()) j["violated"] = violated;
        emitJson(j, out);
    } else {
        out << "model: " << md.origin << "\n";
        for (const auto& r : rows) out << "  " << r.first << ": " << r.second << "\n";
        if (!violated.empty()) out << "  violated: " << violated << "\n";
        out << (ok ? "ok\n" : "failed\n");
    }
    return ok ? 0 : 1;
}

/* ---------------------------------------------------------------- rank */

int cmdRank(const std::string& path, const RunConfig& cfg, int samples, bool symbolic, bool json,
            std::ostream& out) {
    FramedModel md = loadModel(path);
    RankReport rep;
    if (symbolic) {
        rep.model = md.origin;
        rep.maxRank = md.maxRank();
        rep.genericRank = md.genericRank();
        rep.gridSize = 0;
        rep.certificate = md.certifyMaxRank();
        if (rep.genericRank == 0)
            rep.classification = "integrable";
        else if (rep.certificate.certified && rep.genericRank == rep.maxRank)
            rep.classification = "maximally-non-integrable (certified)";
        else
            rep.classification = "symbolic only (not sampled)";
    } else {
        int grid = samples > 0 ? samples : cfg.gridSize;
        rep = md.minSampledRank(grid, cfg.tolerance);
    }
    if (json) {
        emitJson(rankReportToJson(rep), out);
        return 0;
    }
    out << "model: " << rep.model << "\n";
    out << "generic rank: " << rep.genericRank << " (max possible " << rep.maxRank << ")\n";
    if (!symbolic) {
        out << "grid: " << rep.gridSize << " per angle\n";
        out << "sampled min rank: " << rep.sampledMinRank << "\n";
        if (!rep.witness.empty()) {
            out << "witness (turns):";
            for (const auto& wit : rep.witness) out << ' ' << wit.first << " = " << render(wit.second);
            out << "\n";
        }
    }
    if (rep.certificate.certified)
        out << "certificate: " << rep.certificate.detail << "\n";
    else if (!rep.certificate.detail.empty())
        out << "certificate: none (" << rep.certificate.detail << ")\n";
    out << "classification: " << rep.classification << "\n";
    return 0;
}

/* ----------------------------------------------------------- cohomology */

int cmdCohomology(const std::string& path, const std::string& theory, bool json, std::ostream& out) {
    FourComplex A = loadAnyComplex(path);
    std::string th = theory;
    int rMax = -1;
    if (th.rfind("frolicher", 0) == 0 && (th.size() == 9 || th[9] == ':')) {
        if (th.size() > 9) {
            std::string tail = th.substr(10);
            try {
                size_t pos = 0;
                rMax = std::stoi(tail, &pos);
                if (pos != tail.size() || rMax < 1) throw std::invalid_argument(tail);
            } catch (const std::exception&) {
                throw IoError("frolicher page bound must be a positive integer, got \"" + tail + "\"");
            }
        }
        th = "frolicher";
    }
    if (th == "frolicher") {
        if (rMax < 0) rMax = frolicher(A, 1).front().degenerateFrom;
        std::vector<SpectralPage> pages = frolicher(A, rMax);
        if (json) {
            emitJson(pagesToJson(pages), out);
            return 0;
        }
        for (const auto& pg : pages) {
            out << "page r=" << pg.r << ":\n";
            printGrid(pg.table, out);
        }
        out << "degenerates from page " << pages.front().degenerateFrom << "\n";
        return 0;
    }
    CohomologyTable t;
    if (th == "dol")
        t = hDol(A);
    else if (th == "dolbar")
        t = hDolbar(A);
    else if (th == "bc")
        t = hBottChern(A);
    else if (th == "aeppli")
        t = hAeppli(A);
    else if (th == "derham")
        t = hDeRham(A);
    else
        throw IoError("unknown theory \"" + theory +
                      "\" (expected dol|dolbar|bc|aeppli|derham|frolicher[:R])");
    if (json) {
        emitJson(tableToJson(t), out);
        return 0;
    }
    printTable(t, out);
    return 0;
}

/* -------------------------------------------------------------- obstruct */

struct Dim4Args {
    long long chi = 0, sigma = 0;
    long long bPlus = -1, bMinus = -1;
    std::string definiteness;
    int admits = -1;  // -1 unknown
};

Definiteness parseDefiniteness(const std::string& s, long long bp, long long bm) {
    if (s.empty()) {
        if (bp == 0 && bm == 0) return Definiteness::ZeroForm;
        if (bm == 0) return Definiteness::PositiveDefinite;
        if (bp == 0) return Definiteness::NegativeDefinite;
        return Definiteness::Indefinite;
    }
    if (s == "positive") return Definiteness::PositiveDefinite;
    if (s == "negative") return Definiteness::NegativeDefinite;
    if (s == "indefinite") return Definiteness::Indefinite;
    if (s == "zero") return Definiteness::ZeroForm;
    throw IoError("definiteness must be positive|negative|indefinite|zero, got \"" + s + "\"");
}

int cmdDim4(const Dim4Args& a, bool json, std::ostream& out) {
    Int chi(a.chi), sigma(a.sigma);
    Int lin = 5 * chi + 6 * sigma;
    bool linOk = mniNecessaryDim4(chi, sigma);
    bool ok = linOk;
    Json j;
    j["five_chi_plus_six_sigma"] = lin.str();
    j["linear_obstruction"] = linOk;
    std::ostringstream text;
    text << "5 chi + 6 sigma = " << lin.str() << "  " << (linOk ? "pass" : "fail") << "\n";
    bool classify = a.bPlus >= 0 || a.bMinus >= 0 || !a.definiteness.empty() || a.admits >= 0;
    if (classify) {
        if (a.bPlus < 0 || a.bMinus < 0)
            throw IoError("classification needs both --b-plus and --b-minus");
        Dim4Invariants inv;
        inv.chi = chi;
        inv.sigma = sigma;
        inv.bPlus = Int(a.bPlus);
        inv.bMinus = Int(a.bMinus);
        inv.definiteness = parseDefiniteness(a.definiteness, a.bPlus, a.bMinus);
        std::optional<bool> admits;
        if (a.admits == 0) admits = false;
        if (a.admits == 1) admits = true;
        ClassifyVerdict v = fourMfdClassify(inv, admits);
        j["classification"] = classifyToJson(v);
        text << "definiteness: " << definitenessName(inv.definiteness) << "\n";
        if (v.condB.has_value())
            text << "condition B (acs exists and 5 chi + 6 sigma = 0): "
                 << (*v.condB ? "holds" : "fails") << "\n";
        text << "condition C (5 chi + 6 sigma = 0, 4 | sigma, definite forces b+ = 0): "
             << (v.condC ? "holds" : "fails") << "\n";
        if (!v.caseUsed.empty()) text << "case: " << v.caseUsed << "\n";
        ok = ok && v.condC && (!v.condB.has_value() || *v.condB);
    }
    j["ok"] = ok;
    if (json)
        emitJson(j, out);
    else
        out << text.str() << (ok ? "ok\n" : "failed\n");
    return ok ? 0 : 1;
}

int cmdDim6(long long c111, long long c12, long long c3, bool json, std::ostream& out) {
    ChernNumbers6 c{Int(c111), Int(c12), Int(c3)};
    Dim6Report r = mniNecessaryDim6(c);
    if (json) {
        emitJson(dim6ToJson(r), out);
    } else {
        out << "c1^3 = 0: " << (r.c1CubedZero ? "pass" : "fail") << "\n";
        out << "c1 c2 = 0: " << (r.c1c2Zero ? "pass" : "fail") << "\n";
        out << "note: " << r.note << "\n" << (r.pass() ? "ok\n" : "failed\n");
    }
    return r.pass() ? 0 : 1;
}

int cmdDim8(long long c1p4, long long c1sqC2, long long c1c3, long long c2sq, long long c4,
            bool json, std::ostream& out) {
    ChernNumbers8 c{Int(c1p4), Int(c1sqC2), Int(c1c3), Int(c2sq), Int(c4)};
    Dim8Report r = mniNecessaryDim8(c);
    if (json) {
        emitJson(dim8ToJson(r), out);
    } else {
        out << "c1 c3 + 8 c1^4 + c1^2 c2 = 0: " << (r.check1 ? "pass" : "fail") << "\n";
        out << "c4 - c1 c3 + c1^2 c2 = 0: " << (r.check2 ? "pass" : "fail") << "\n";
        out << "c4 = 2 c1 c3 + 8 c1^4: " << (r.derivedC4 ? "pass" : "fail") << "\n";
        out << "signature = " << render(r.sigma) << " (integral: " << (r.sigmaIntegral ? "yes" : "no")
            << ")\n";
        out << "6 | c4: " << (r.chiDiv6 ? "pass" : "fail") << "\n";
        out << (r.pass() ? "ok\n" : "failed\n");
    }
    return r.pass() ? 0 : 1;
}

int cmdCodim(long long n, bool json, std::ostream& out) {
    CodimResult r = degenerateCodim(Int(n));
    if (json) {
        emitJson(codimToJson(r), out);
    } else {
        out << "codimension: " << r.codim.str() << "\n";
        out << "margin (n^2 - 5n + 2)/2: " << render(r.margin)
            << (r.marginPositive ? " (positive)" : " (not positive)") << "\n";
    }
    return 0;
}

int cmdJets(long long n, bool json, std::ostream& out) {
    if (n > 1000000) throw IoError("jet threshold input is limited to n <= 1000000");
    JetResult r = jetMinK(int(n));
    if (json) {
        emitJson(jetsToJson(r), out);
    } else {
        out << "smallest k: " << r.k << "\n";
        out << "n * C(n+k, k) = " << r.lhs.str() << " > " << r.rhs.str()
            << " = 2 * C(n+k+1, k+1)\n";
    }
    return 0;
}

/* ---------------------------------------------------------------- paper */

GaussianRational gi(long re, long im = 0) { return {Rational(re), Rational(im)}; }

ScalarFraction sfz(const GenEnvPtr& e) { return ScalarFraction::constant(e, gi(0)); }

FramedModel builtinModel(const std::string& name, const Json& extra) {
    Json j = extra;
    j["kind"] = "builtin";
    j["name"] = name;
    return modelFromJson(j);
}

FramedModel flatTorus(int k) { return builtinModel("torus_flat", Json{{"n", k}}); }

FramedModel ktModel(int which) {
    return builtinModel("kodaira_thurston", Json{{"which", which}});
}

FramedModel nil6Model(unsigned seed) {
    return fromLieAlgebra(6, {{1, 2, {{5, gi(1)}}}, {1, 3, {{6, gi(1)}}}},
                          conjugatedStandardJ(6, seed), "nilpotent6");
}

/* frame fields of the mapping torus scaled to the 1/m window */
struct MtPair {
    VectorField A, B;
};

MtPair mtPair(const FramedModel& md, int m) {
    auto w = OscillatorElement::generatorSlot(md.env, 0);
    auto winv = OscillatorElement::generatorSlot(md.env, 0, -1);
    ScalarFraction s{GaussianRational(Rational(0), Rational(-1, 2)) * (w - winv)};
    ScalarFraction c{GaussianRational(Rational(1, 2)) * (w + winv)};
    ScalarFraction im = ScalarFraction::constant(md.env, GaussianRational(Rational(1, m)));
    VectorField A = md.frameVector(0);
    A.comp[1] = im * s;
    A.comp[2] = sfz(md.env) - im * c;
    VectorField B = md.frameVector(3);
    B.comp[1] = im * c;
    B.comp[2] = im * s;
    return {A, B};
}

/* sqrt(sum |N_a/m - sign [A,B]_a/m|^2 / sum |sign [A,B]_a/m|^2) <= 10/m
 * at three sample angles, for m = 10 and 100 */
bool mtLeadingOrder(int sign) {
    for (int m : {10, 100}) {
        FramedModel md = mappingTorusS1S3(m);
        MtPair f = mtPair(md, m);
        VectorField N = md.nijenhuis(f.A, f.B);
        VectorField br = md.bracket(f.A, f.B);
        for (Rational t : {Rational(1, 7), Rational(2, 5), Rational(5, 9)}) {
            EvalPoint p = md.evalPoint({t});
            double num = 0, den = 0;
            for (size_t a = 0; a < 4; ++a) {
                std::complex<double> x = N.comp[a].eval(p) / double(m);
                std::complex<double> y = br.comp[a].eval(p) / double(m) * double(sign);
                num += std::norm(x - y);
                den += std::norm(y);
            }
            if (!(std::sqrt(num / den) <= 10.0 / m)) return false;
        }
    }
    return true;
}

bool rankIs(const FramedModel& md, int d, int grid) {
    if (md.genericRank() != d) return false;
    RankReport rep = md.minSampledRank(grid);
    return rep.sampledMinRank == d;
}

int diffRank(const FourComplex& A, Diff d, Bidegree pq) {
    auto it = A.diffs[size_t(d)].find(pq);
    return it == A.diffs[size_t(d)].end() ? 0 : rankT(it->second);
}

/* dbar cohomology dimension computed from kernel and image ranks alone */
std::map<Bidegree, int> directDbarTable(const FourComplex& A) {
    std::map<Bidegree, int> t;
    for (const auto& e : A.dims) {
        int p = e.first.first, q = e.first.second;
        int v = e.second - diffRank(A, Diff::Dbar, {p, q}) - diffRank(A, Diff::Dbar, {p, q - 1});
        if (v > 0) t[{p, q}] = v;
    }
    return t;
}

bool subQuotientTrivial(const FourComplex& A) {
    FourComplex S = subDouble(A);
    FourComplex Q = quotientDouble(A);
    return S.dims == A.dims && Q.dims == A.dims && S.diffs == A.diffs && Q.diffs == A.diffs;
}

std::vector<FourComplex> doubleComplexZoo() {
    std::vector<FourComplex> zoo;
    FourComplex xy;
    xy.dims[{0, 0}] = 1;
    xy.dims[{0, 1}] = 1;
    xy.diffs[size_t(Diff::Dbar)][{0, 0}] = {{gi(1)}};
    xy.validate();
    zoo.push_back(xy);
    zoo.push_back(fromLeftInvariant(ktModel(2)));
    zoo.push_back(fromLeftInvariant(abelianModel(conjugatedStandardJ(4, 7), "abelian")));
    return zoo;
}

int cmdPaper(std::ostream& out) {
    int failures = 0, total = 0;
    auto line = [&](const std::string& name, const std::function<bool()>& f) {
        ++total;
        bool ok = false;
        std::string note;
        try {
            ok = f();
        } catch (const std::exception& e) {
            note = e.what();
        }
        out << (ok ? "PASS  " : "FAIL  ") << name;
        if (!ok && !note.empty()) out << "  [" << note << "]";
        out << "\n";
        if (!ok) ++failures;
    };
    const GaussianRational A2 = gi(2), A3 = gi(3);

    line("torus_mni(2, A=2): generic rank 1, certified, rank 1 on grid 9", [&] {
        auto md = torusMni(2, A2);
        return md.genericRank() == 1 && md.minSampledRank(9).sampledMinRank == 1 &&
               md.certifyMaxRank().certified;
    });
    line("torus_mni(3, A=2): rank 3 on grid 9 with certificate", [&] {
        auto md = torusMni(3, A2);
        return md.genericRank() == 3 && md.minSampledRank(9).sampledMinRank == 3 &&
               md.certifyMaxRank().certified;
    });
    line("torus_mni(4, A=2): rank 4 on grid 9 with certificate", [&] {
        auto md = torusMni(4, A2);
        return md.genericRank() == 4 && md.minSampledRank(9).sampledMinRank == 4 &&
               md.certifyMaxRank().certified;
    });
    line("torus_mni(3, A=3): rank 3 on grid 9 with certificate", [&] {
        auto md = torusMni(3, A3);
        return md.genericRank() == 3 && md.minSampledRank(9).sampledMinRank == 3 &&
               md.certifyMaxRank().certified;
    });
    line("torus_mni(4, A=3): rank 4 on grid 9 with certificate", [&] {
        auto md = torusMni(4, A3);
        return md.genericRank() == 4 && md.minSampledRank(9).sampledMinRank == 4 &&
               md.certifyMaxRank().certified;
    });
    line("t6_rank2: constant rank 2 on grid 9", [&] { return rankIs(t6Rank2(), 2, 9); });
    line("c2_example(u1): mubar(omega_1) = (i/2) u1 conj(omega_1) ^ conj(omega_2)", [&] {
        auto md = c2Example("u1");
        Form expect = Form::cw(md.env, 2, 1).wedge(Form::cw(md.env, 2, 2)) *
                      ScalarFraction{parsePoly(md.env, "1/2*i*u1")};
        return md.mubar(0).equals(expect) && md.mubar(1).isZero();
    });
    line("c2_example(u1): rank 1 at every grid point", [&] { return rankIs(c2Example("u1"), 1, 9); });
    line("c2_example(u1^2): mubar coefficient i u1^2 and rank 1 everywhere", [&] {
        auto md = c2Example("u1^2");
        Form expect = Form::cw(md.env, 2, 1).wedge(Form::cw(md.env, 2, 2)) *
                      ScalarFraction{parsePoly(md.env, "i*u1^2")};
        return md.mubar(0).equals(expect) && rankIs(md, 1, 9);
    });
    line("products on T^2 realize rank 0", [&] { return rankIs(flatTorus(1), 0, 9); });
    line("products on T^4 realize ranks 0..1 (A=3 factors)", [&] {
        return rankIs(flatTorus(2), 0, 9) && rankIs(torusMni(2, A3), 1, 9);
    });
    line("products on T^6 realize ranks 0..3 (A=3 factors)", [&] {
        return rankIs(flatTorus(3), 0, 9) &&
               rankIs(productModel(torusMni(2, A3), flatTorus(1)), 1, 9) &&
               rankIs(t6Rank2(), 2, 9) && rankIs(torusMni(3, A3), 3, 9);
    });
    line("products on T^8 realize ranks 0..4 (A=3 factors)", [&] {
        return rankIs(flatTorus(4), 0, 9) &&
               rankIs(productModel(torusMni(2, A3), flatTorus(2)), 1, 9) &&
               rankIs(productModel(torusMni(2, A3), torusMni(2, A3)), 2, 9) &&
               rankIs(productModel(torusMni(3, A3), flatTorus(1)), 3, 9) &&
               rankIs(torusMni(4, A3), 4, 9);
    });
    line("s1s3 mapping torus: smallest m with sampled min rank 1 on grid 9 is m = 1", [&] {
        for (int m = 1; m <= 10; ++m) {
            RankReport rep = mappingTorusS1S3(m).minSampledRank(9);
            if (rep.sampledMinRank != 1) return false;
        }
        return true;
    });
    line("s1s3 leading order: N(A,B)/m matches -[A,B]/m at m = 10, 100", [&] {
        return mtLeadingOrder(-1);
    });
    line("s1s3 leading order: N(A,B)/m matches +[A,B]/m at m = 10, 100", [&] {
        return mtLeadingOrder(+1);
    });
    line("left-invariant structures on tori: mubar = 0 for 50 random J", [&] {
        for (unsigned seed = 0; seed < 50; ++seed) {
            int dim = seed % 2 ? 6 : 4;
            if (abelianModel(conjugatedStandardJ(dim, seed), "abelian").genericRank() != 0)
                return false;
        }
        return true;
    });
    line("N = 4*mubar on all builtins", [&] {
        std::vector<FramedModel> mods;
        mods.push_back(torusMni(2, A2));
        mods.push_back(torusMni(3, A2));
        mods.push_back(t6Rank2());
        mods.push_back(c2Example("u1"));
        mods.push_back(mappingTorusS1S3(1));
        mods.push_back(mappingTorusS1S3(2));
        mods.push_back(ktModel(1));
        mods.push_back(ktModel(2));
        mods.push_back(abelianModel(standardJ(4), "abelian"));
        mods.push_back(flatTorus(2));
        for (const auto& md : mods)
            if (!md.checkIdentification()) return false;
        return true;
    });
    line("dim4 linear obstruction: CP^2 gives 21, K3 gives 24, zero data passes", [&] {
        return 5 * Int(3) + 6 * Int(1) == 21 && !mniNecessaryDim4(Int(3), Int(1)) &&
               5 * Int(24) + 6 * Int(-16) == 24 && !mniNecessaryDim4(Int(24), Int(-16)) &&
               mniNecessaryDim4(Int(0), Int(0)) && mniNecessaryDim4(Int(6), Int(-5));
    });
    line("dim4 classification: zero form passes, CP^2 fails, sigma = 2 mod 4 fails", [&] {
        Dim4Invariants zero{Int(0), Int(0), Int(0), Int(0), Definiteness::ZeroForm};
        if (!fourMfdClassify(zero).condC) return false;
        Dim4Invariants cp2{Int(3), Int(1), Int(1), Int(0), Definiteness::PositiveDefinite};
        if (fourMfdClassify(cp2).condC) return false;
        Dim4Invariants s2{Int(-12), Int(10), Int(11), Int(1), Definiteness::Indefinite};
        if (fourMfdClassify(s2).condC) return false;
        Dim4Invariants good{Int(24), Int(-20), Int(2), Int(22), Definiteness::Indefinite};
        ClassifyVerdict v = fourMfdClassify(good, true);
        return v.condB.has_value() && *v.condB && v.condC;
    });
    line("dim6 checks: zero chern numbers pass, c1^3 = 1 fails", [&] {
        return mniNecessaryDim6({Int(0), Int(0), Int(5)}).pass() &&
               !mniNecessaryDim6({Int(1), Int(0), Int(0)}).pass();
    });
    line("dim8 checks: zero chern numbers pass, derived relation and 6 | c4 enforced", [&] {
        if (!mniNecessaryDim8({Int(0), Int(0), Int(0), Int(0), Int(0)}).pass()) return false;
        Dim8Report bad = mniNecessaryDim8({Int(0), Int(0), Int(0), Int(45), Int(6)});
        return !bad.pass() && bad.check1 && !bad.check2;
    });
    line("jet threshold: n = 3, 4, 5 gives k = 6, 4, 3 (252>240, 280>252, 280>252)", [&] {
        JetResult a = jetMinK(3), b = jetMinK(4), c = jetMinK(5);
        return a.k == 6 && a.lhs == 252 && a.rhs == 240 && b.k == 4 && b.lhs == 280 &&
               b.rhs == 252 && c.k == 3 && c.lhs == 280 && c.rhs == 252;
    });
    line("degenerate stratum: margin positive exactly for n >= 5 (n = 2..12)", [&] {
        for (long n = 2; n <= 12; ++n)
            if (degenerateCodim(Int(n)).marginPositive != (n >= 5)) return false;
        return true;
    });
    line("double complexes: dolbeault table equals direct dbar cohomology", [&] {
        for (const auto& A : doubleComplexZoo())
            if (hDol(A).table != directDbarTable(A)) return false;
        return true;
    });
    line("double complexes: A_s = A = A_q", [&] {
        for (const auto& A : doubleComplexZoo())
            if (!subQuotientTrivial(A)) return false;
        return true;
    });
    line("kodaira thurston: de rham betti (1,3,4,3,1) and E_infty totals match", [&] {
        FourComplex A = fromLeftInvariant(ktModel(1));
        CohomologyTable dr = hDeRham(A);
        const int betti[5] = {1, 3, 4, 3, 1};
        for (int k = 0; k <= 4; ++k) {
            auto it = dr.table.find({k, 0});
            if ((it == dr.table.end() ? 0 : it->second) != betti[k]) return false;
        }
        int dfrom = frolicher(A, 1).front().degenerateFrom;
        std::map<Bidegree, int> einf = frolicher(A, dfrom).back().table;
        for (int k = 0; k <= 4; ++k) {
            int s = 0;
            for (int p = 0; p <= k; ++p) {
                auto it = einf.find({p, k - p});
                if (it != einf.end()) s += it->second;
            }
            if (s != betti[k]) return false;
        }
        return true;
    });
    line("diagram maps commute on kt, abelian, nilpotent6, and double complexes", [&] {
        std::vector<FourComplex> cs = doubleComplexZoo();
        cs.push_back(fromLeftInvariant(ktModel(1)));
        cs.push_back(fromLeftInvariant(nil6Model(1)));
        for (const auto& A : cs)
            if (!diagramMaps(A).commutes) return false;
        return true;
    });

    out << (total - failures) << " of " << total << " checks passed\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

/* ------------------------------------------------------------- dispatch */

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        RunConfig cfg = resolveBase();

        CLI::App app{"exact arithmetic for almost complex structures and bigraded complexes"};
        app.name("acslab");
        app.require_subcommand(1);
        int gridFlag = cfg.gridSize;
        double tolFlag = cfg.tolerance;
        long seedFlag = cfg.seed;
        app.add_option("--grid", gridFlag, "grid points per oscillator angle");
        app.add_option("--tolerance", tolFlag, "numeric rank tolerance");
        app.add_option("--seed", seedFlag, "seed for randomized checks");

        std::string verifyPath;
        bool verifyJson = false;
        auto* cVerify = app.add_subcommand("verify", "check the construction invariants of a model");
        cVerify->fallthrough();
        cVerify->add_option("model", verifyPath, "model JSON file")->required();
        cVerify->add_flag("--json", verifyJson, "emit a JSON report");

        std::string rankPath;
        bool rankJson = false, rankSymbolic = false;
        int rankSamples = -1;
        auto* cRank = app.add_subcommand("rank", "generic and sampled Nijenhuis rank of a model");
        cRank->fallthrough();
        cRank->add_option("model", rankPath, "model JSON file")->required();
        cRank->add_option("--samples", rankSamples, "grid points per oscillator angle");
        cRank->add_flag("--symbolic", rankSymbolic, "skip grid sampling");
        cRank->add_flag("--json", rankJson, "emit a JSON report");

        std::string cohoPath, cohoTheory;
        bool cohoJson = false;
        auto* cCoho = app.add_subcommand("cohomology", "cohomology of a model or explicit complex");
        cCoho->fallthrough();
        cCoho->add_option("input", cohoPath, "model or complex JSON file")->required();
        cCoho->add_option("--theory", cohoTheory, "dol|dolbar|bc|aeppli|derham|frolicher[:R]")
            ->required();
        cCoho->add_flag("--json", cohoJson, "emit a JSON report");

        auto* cObs = app.add_subcommand("obstruct", "integer obstruction checks");
        cObs->require_subcommand(1);

        Dim4Args d4;
        bool d4Json = false;
        auto* cD4 = cObs->add_subcommand("dim4", "4-manifold characteristic number checks");
        cD4->add_option("--chi", d4.chi, "Euler characteristic")->required();
        cD4->add_option("--sigma", d4.sigma, "signature")->required();
        cD4->add_option("--b-plus", d4.bPlus, "b+ of the intersection form");
        cD4->add_option("--b-minus", d4.bMinus, "b- of the intersection form");
        cD4->add_option("--definiteness", d4.definiteness, "positive|negative|indefinite|zero");
        cD4->add_option("--admits-acs", d4.admits, "1 if an almost complex structure is known to exist")
            ->check(CLI::Range(0, 1));
        cD4->add_flag("--json", d4Json, "emit a JSON report");

        long long c111 = 0, c12 = 0, c3 = 0;
        bool d6Json = false;
        auto* cD6 = cObs->add_subcommand("dim6", "6-manifold Chern number checks");
        cD6->add_option("--c1c1c1", c111, "c1^3")->required();
        cD6->add_option("--c1c2", c12, "c1 c2")->required();
        cD6->add_option("--c3", c3, "c3")->required();
        cD6->add_flag("--json", d6Json, "emit a JSON report");

        long long c1p4 = 0, c1sqC2 = 0, c1c3 = 0, c2sq = 0, c4 = 0;
        bool d8Json = false;
        auto* cD8 = cObs->add_subcommand("dim8", "8-manifold Chern number checks");
        cD8->add_option("--c1p4", c1p4, "c1^4")->required();
        cD8->add_option("--c1sq-c2", c1sqC2, "c1^2 c2")->required();
        cD8->add_option("--c1c3", c1c3, "c1 c3")->required();
        cD8->add_option("--c2sq", c2sq, "c2^2")->required();
        cD8->add_option("--c4", c4, "c4")->required();
        cD8->add_flag("--json", d8Json, "emit a JSON report");

        long long codimN = 0;
        bool codimJson = false;
        auto* cCodim = cObs->add_subcommand("codim", "codimension of the degenerate stratum");
        cCodim->add_option("--n", codimN, "complex dimension")->required();
        cCodim->add_flag("--json", codimJson, "emit a JSON report");

        long long jetsN = 0;
        bool jetsJson = false;
        auto* cJets = cObs->add_subcommand("jets", "jet dimension threshold");
        cJets->add_option("--n", jetsN, "complex dimension")->required();
        cJets->add_flag("--json", jetsJson, "emit a JSON report");

        long long jetsN2 = 0;
        bool jetsJson2 = false;
        auto* cJetsTop = app.add_subcommand("jets", "jet dimension threshold");
        cJetsTop->add_option("--n", jetsN2, "complex dimension")->required();
        cJetsTop->add_flag("--json", jetsJson2, "emit a JSON report");

        auto* cPaper = app.add_subcommand("paper", "run the full example scoreboard");
        cPaper->fallthrough();

        try {
            std::vector<std::string> rev(args.rbegin(), args.rend());
            app.parse(rev);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e, out, err);
            return code == 0 ? 0 : 2;
        }

        cfg.gridSize = gridFlag;
        cfg.tolerance = tolFlag;
        cfg.seed = seedFlag;
        validateConfig(cfg);
        bool jsonMode = cfg.outputMode == "json";

        if (cVerify->parsed()) return cmdVerify(verifyPath, verifyJson || jsonMode, out);
        if (cRank->parsed())
            return cmdRank(rankPath, cfg, rankSamples, rankSymbolic, rankJson || jsonMode, out);
        if (cCoho->parsed()) return cmdCohomology(cohoPath, cohoTheory, cohoJson || jsonMode, out);
        if (cD4->parsed()) return cmdDim4(d4, d4Json || jsonMode, out);
        if (cD6->parsed()) return cmdDim6(c111, c12, c3, d6Json || jsonMode, out);
        if (cD8->parsed()) return cmdDim8(c1p4, c1sqC2, c1c3, c2sq, c4, d8Json || jsonMode, out);
        if (cCodim->parsed()) return cmdCodim(codimN, codimJson || jsonMode, out);
        if (cJets->parsed()) return cmdJets(jetsN, jetsJson || jsonMode, out);
        if (cJetsTop->parsed()) return cmdJets(jetsN2, jetsJson2 || jsonMode, out);
        if (cPaper->parsed()) return cmdPaper(out);
        err << "acslab: no subcommand\n";
        return 2;
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const EvalError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const ObstructionError& e) {
        err << "obstruct: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const FourComplexError& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        err << "json: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace acslab
