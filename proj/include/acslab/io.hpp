#pragma once

// JSON input for models and 4-complexes, and JSON serialization of every
// report the command line emits.  Bidegrees are encoded as "p,q" keys;
// scalars use the same grammar the parser accepts, so emitted files load
// back to equal values.

#include "acslab/fourcomplex.hpp"
#include "acslab/model.hpp"
#include "acslab/obstructions.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace acslab {

using Json = nlohmann::json;

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error("io: " + what) {}
};

// model files: kind = lie_algebra | coordinate | builtin | product
FramedModel modelFromJson(const Json& j, const std::string& baseDir = ".", int depth = 0);
FramedModel loadModel(const std::string& path, int depth = 0);

FourComplex fourComplexFromJson(const Json& j);
Json fourComplexToJson(const FourComplex& A);
FourComplex loadFourComplex(const std::string& path);

// either a model (turned into its invariant-form complex) or a raw complex
FourComplex loadAnyComplex(const std::string& path);

Json tableToJson(const CohomologyTable& t);
Json pagesToJson(const std::vector<SpectralPage>& pages);
Json rankReportToJson(const RankReport& r);
Json relationReportToJson(const RelationReport& r);
Json diagramReportToJson(const DiagramReport& r);
Json dim6ToJson(const Dim6Report& r);
Json dim8ToJson(const Dim8Report& r);
Json classifyToJson(const ClassifyVerdict& v);
Json codimToJson(const CodimResult& r);
Json jetsToJson(const JetResult& r);

std::string bidegreeKey(int p, int q);
Bidegree parseBidegreeKey(const std::string& s);

}  // namespace acslab
