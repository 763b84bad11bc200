#include "definetti/json_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>

#include "definetti/errors.hpp"

namespace definetti {

namespace {

void need(bool ok, const std::string& what) { require(ok, ErrorKind::InvalidInput, what); }

double number(const Json& j, const std::string& what) {
  need(j.is_number(), what + " must be a number");
  const double x = j.get<double>();
  need(std::isfinite(x), what + " must be finite");
  return x;
}

int positive_int(const Json& j, const std::string& what) {
  need(j.is_number_integer() && j.get<long long>() >= 1 && j.get<long long>() <= 1 << 20,
       what + " must be a positive integer");
  return j.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& what) {
  need(j.is_array() && !j.empty(), what + " must be a nonempty array");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(positive_int(x, what + " entry"));
  return out;
}

// Reads a nested table with the given shape into out, first index most
// significant.
void flatten(const Json& j, const std::vector<int>& shape, std::size_t level, std::vector<double>& out,
             const std::string& what) {
  if (level == shape.size()) {
    out.push_back(number(j, what + " entry"));
    return;
  }
  need(j.is_array() && static_cast<int>(j.size()) == shape[level],
       what + " must have " + std::to_string(shape[level]) + " entries at depth " + std::to_string(level + 1));
  for (const auto& x : j) flatten(x, shape, level + 1, out, what);
}

Json nest(const std::vector<double>& flat, const std::vector<int>& shape, std::size_t level, std::size_t& pos) {
  if (level == shape.size()) return flat[pos++];
  Json a = Json::array();
  for (int i = 0; i < shape[level]; ++i) a.push_back(nest(flat, shape, level + 1, pos));
  return a;
}

Json nest(const std::vector<double>& flat, const std::vector<int>& shape) {
  std::size_t pos = 0;
  return nest(flat, shape, 0, pos);
}

std::vector<std::vector<std::string>> labels(const Json& j, int players, const std::string& what) {
  need(j.is_array() && static_cast<int>(j.size()) == players, what + " needs one list per player");
  std::vector<std::vector<std::string>> out;
  for (const auto& list : j) {
    need(list.is_array() && !list.empty(), what + " lists must be nonempty arrays");
    std::vector<std::string> row;
    for (const auto& x : list) {
      need(x.is_string() || x.is_number_integer(), what + " labels must be strings or integers");
      row.push_back(x.is_string() ? x.get<std::string>() : x.dump());
    }
    out.push_back(row);
  }
  return out;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  need(j.is_array() && !j.empty(), "matrix must be a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = j[r];
    need(row.is_array() && static_cast<Eigen::Index>(row.size()) == n, "matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const Json& z = row[c];
      if (z.is_number()) {
        m(r, c) = number(z, "matrix entry");
      } else {
        need(z.is_array() && z.size() == 2, "matrix entries must be [re, im] pairs");
        m(r, c) = Complex(number(z[0], "matrix entry"), number(z[1], "matrix entry"));
      }
    }
  }
  return m;
}

Json state_to_json(const DensityMatrix& rho) {
  Json j;
  j["dims"] = rho.dims();
  j["matrix"] = matrix_to_json(rho.data());
  return j;
}

DensityMatrix state_from_json(const Json& j, const Tolerances& tol) {
  return guarded([&] {
    need(j.is_object() && j.contains("dims") && j.contains("matrix"), "state needs \"dims\" and \"matrix\"");
    return DensityMatrix(int_list(j["dims"], "dims"), matrix_from_json(j["matrix"]), tol);
  });
}

HermitianOp operator_from_json(const Json& j, const Tolerances& tol) {
  return guarded([&] {
    need(j.is_object() && j.contains("dims") && j.contains("matrix"), "operator needs \"dims\" and \"matrix\"");
    return HermitianOp(int_list(j["dims"], "dims"), matrix_from_json(j["matrix"]), tol);
  });
}

Json povm_to_json(const Povm& p) {
  Json j;
  j["dim"] = p.dim();
  j["elements"] = Json::array();
  for (const Matrix& e : p.elements()) j["elements"].push_back(matrix_to_json(e));
  return j;
}

Povm povm_from_json(const Json& j, const Tolerances& tol) {
  return guarded([&] {
    need(j.is_object() && j.contains("dim") && j.contains("elements"), "POVM needs \"dim\" and \"elements\"");
    const int d = positive_int(j["dim"], "dim");
    need(j["elements"].is_array() && !j["elements"].empty(), "elements must be a nonempty array");
    std::vector<Matrix> elements;
    for (const auto& e : j["elements"]) {
      elements.push_back(matrix_from_json(e));
      need(elements.back().rows() == d, "POVM element size differs from dim");
    }
    return Povm(d, std::move(elements), tol);
  });
}

Json game_to_json(const Game& g) {
  Json j;
  j["players"] = g.players();
  j["questions"] = g.questions;
  j["answers"] = g.answers;
  const auto qs = g.question_sizes();
  auto shape = qs;
  for (int a : g.answer_sizes()) shape.push_back(a);
  j["pi"] = nest(g.pi, qs);
  j["V"] = nest(g.v, shape);
  return j;
}

Game game_from_json(const Json& j) {
  return guarded([&] {
    need(j.is_object(), "game must be a JSON object");
    for (const char* key : {"players", "questions", "answers", "pi", "V"})
      need(j.contains(key), std::string("game needs \"") + key + "\"");
    Game g;
    const int m = positive_int(j["players"], "players");
    g.questions = labels(j["questions"], m, "questions");
    g.answers = labels(j["answers"], m, "answers");
    const auto qs = g.question_sizes();
    auto shape = qs;
    for (int a : g.answer_sizes()) shape.push_back(a);
    flatten(j["pi"], qs, 0, g.pi, "pi");
    flatten(j["V"], shape, 0, g.v, "V");
    for (double x : g.v) need(x >= 0 && x <= 1, "payoff entries must lie in [0, 1]");
    g.validate();
    return g;
  });
}

Json box_to_json(const NsBox& b) {
  Json j;
  j["question_sizes"] = b.question_sizes;
  j["answer_sizes"] = b.answer_sizes;
  auto shape = b.question_sizes;
  for (int a : b.answer_sizes) shape.push_back(a);
  j["p"] = nest(b.p, shape);
  return j;
}

NsBox box_from_json(const Json& j) {
  return guarded([&] {
    need(j.is_object() && j.contains("question_sizes") && j.contains("answer_sizes") && j.contains("p"),
         "box needs \"question_sizes\", \"answer_sizes\" and \"p\"");
    NsBox b;
    b.question_sizes = int_list(j["question_sizes"], "question_sizes");
    b.answer_sizes = int_list(j["answer_sizes"], "answer_sizes");
    need(b.question_sizes.size() == b.answer_sizes.size(), "question and answer sizes differ in length");
    auto shape = b.question_sizes;
    for (int a : b.answer_sizes) shape.push_back(a);
    flatten(j["p"], shape, 0, b.p, "p");
    return b;
  });
}

SymmetricSource source_from_json(const Json& j, const Tolerances& tol) {
  if (j.is_object() && j.contains("dims")) return state_from_json(j, tol);
  return guarded([&]() -> SymmetricSource {
    need(j.is_object() && j.contains("weights") && j.contains("states"),
         "source must be a state or have \"weights\" and \"states\"");
    IidMixture mix;
    need(j["weights"].is_array() && j["states"].is_array(), "weights and states must be arrays");
    for (const auto& w : j["weights"]) mix.weights.push_back(number(w, "weight"));
    for (const auto& s : j["states"]) mix.states.push_back(matrix_from_json(s));
    mix.validate();
    return mix;
  });
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  need(in.good(), "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path + " is not valid JSON: " + e.what());
  }
}

}  // namespace definetti
