#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "definetti/games.hpp"
#include "definetti/qstate.hpp"
#include "definetti/tomography.hpp"

namespace definetti {

using Json = nlohmann::ordered_json;

// Complex matrices are row-major arrays of rows of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// { "dims": [d1, ...], "matrix": ... }
Json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const Json& j, const Tolerances& tol = {});
HermitianOp operator_from_json(const Json& j, const Tolerances& tol = {});

// { "dim": d, "elements": [matrix, ...] }
Json povm_to_json(const Povm& p);
Povm povm_from_json(const Json& j, const Tolerances& tol = {});

// { "players": m, "questions": [[labels] per player], "answers": [...],
//   "pi": nested [q1]..[qm], "V": nested [q1]..[qm][a1]..[am] }.
// Payoffs outside [0, 1] are rejected, not clamped.
Json game_to_json(const Game& g);
Game game_from_json(const Json& j);

// { "question_sizes": [...], "answer_sizes": [...], "p": nested
//   [q1]..[qm][a1]..[am] }
Json box_to_json(const NsBox& b);
NsBox box_from_json(const Json& j);

// Either a state (see above) or { "weights": [...], "states": [matrix, ...] }.
SymmetricSource source_from_json(const Json& j, const Tolerances& tol = {});

Json read_json_file(const std::string& path);

}  // namespace definetti
