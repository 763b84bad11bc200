#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "definetti/budget.hpp"
#include "definetti/lp.hpp"

namespace definetti {

// Mixed-radix enumeration of tuples; the first entry is the most significant.
class TupleIndex {
 public:
  TupleIndex() = default;
  explicit TupleIndex(std::vector<int> radices);
  const std::vector<int>& radices() const { return radices_; }
  std::int64_t size() const { return size_; }
  std::int64_t encode(const std::vector<int>& t) const;
  std::vector<int> decode(std::int64_t i) const;

 private:
  std::vector<int> radices_;
  std::int64_t size_ = 1;
};

// m-player game: pi over question tuples, payoff V over (questions, answers)
// in [0, 1]. Tables are flat; question tuples and answer tuples are indexed
// by TupleIndex with player 1 most significant, and V is stored at
// q * answer_tuples + a.
struct Game {
  std::vector<std::vector<std::string>> questions;  // labels per player
  std::vector<std::vector<std::string>> answers;
  std::vector<double> pi;
  std::vector<double> v;

  int players() const { return static_cast<int>(questions.size()); }
  std::vector<int> question_sizes() const;
  std::vector<int> answer_sizes() const;
  TupleIndex question_index() const { return TupleIndex(question_sizes()); }
  TupleIndex answer_index() const { return TupleIndex(answer_sizes()); }
  double payoff(std::int64_t q, std::int64_t a) const;
  void validate() const;
  // Builds a game with labels "0", "1", ... .
  static Game with_sizes(const std::vector<int>& q_sizes, const std::vector<int>& a_sizes);
};

Game chsh();

// Per-player question marginals if pi is a product within tol, else nullopt.
std::optional<std::vector<std::vector<double>>> product_factors(const Game& g, double tol = 1e-12);

// p(answers | questions), flat at q * answer_tuples + a.
struct NsBox {
  std::vector<int> question_sizes;
  std::vector<int> answer_sizes;
  std::vector<double> p;

  double prob(std::int64_t q, std::int64_t a) const;
  // max violation of positivity, normalisation and non-signalling.
  double violation() const;
  void validate(double tol = 1e-10) const;
};

struct GameValue {
  double value = 0.0;
  std::optional<NsBox> box;                 // optimal box (NS LPs)
  std::vector<std::vector<int>> strategy;   // optimal deterministic strategy (classical)
};

// Exact maximum over deterministic strategies.
GameValue classical_value(const Game& g, const Budget& budget = Budget::from_environment());

// Maximum over non-signalling boxes, by LP.
GameValue ns_value(const Game& g, const Budget& budget = Budget::from_environment());

// m+1 players: player 1 gets r ~ pi_1, each of m further players gets an
// independent q_k ~ pi_2; the payoff is (1/m) sum_k V(a, b_k | r, q_k).
Game extend_game(const Game& g, int m, const Budget& budget = Budget::from_environment());

// Maximum of the two-player payoff over boxes p(a, b_1..b_m | r, q_1..q_m)
// that are non-signalling and symmetric under permuting the (b_k, q_k)
// pairs. The returned box is the marginal on players 1 and 2.
GameValue k_extendible_ns_value(const Game& g, int m, const Budget& budget = Budget::from_environment());

struct FreeGameEstimate {
  double estimate = 0.0;
  int m = 0;
  int m_scheduled = 0;
  double eps_effective = 0.0;  // sqrt(ln|A| / (2 m)), equal to eps unless capped
  bool capped = false;
};

// m = ceil(ln|A| / (2 eps^2)) with |A| player 1's answer count.
int free_game_level(const Game& g, double eps);
FreeGameEstimate free_game_value(const Game& g, double eps, std::optional<int> m_cap = {},
                                 const Budget& budget = Budget::from_environment());

// Mixture of deterministic strategy pairs; strategies[i][player][question].
struct LhvModel {
  std::vector<double> weights;
  std::vector<std::vector<std::vector<int>>> strategies;
  NsBox box(const std::vector<int>& question_sizes, const std::vector<int>& answer_sizes) const;
};

struct LhvDistance {
  double distance = 0.0;
  LhvModel model;
};

// min over LHV q of max_b E_{a ~ mu} ||p(.|a,b) - q(.|a,b)||_1 for a
// two-player box, a the first player's question.
LhvDistance nearest_lhv(const NsBox& p, const std::vector<double>& mu,
                        const Budget& budget = Budget::from_environment());

// sqrt(ln|A| / (2 m)) and sqrt(2 ln|X| / k).
double extendible_gap_bound(int answers, int m);
double lhv_rounding_bound(int answers, int k);

}  // namespace definetti
