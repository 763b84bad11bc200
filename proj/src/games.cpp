#include "definetti/games.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "definetti/errors.hpp"

namespace definetti {

TupleIndex::TupleIndex(std::vector<int> radices) : radices_(std::move(radices)) {
  size_ = 1;
  for (int r : radices_) {
    require(r >= 1, ErrorKind::InvalidInput, "alphabet sizes must be positive");
    require(size_ <= (std::int64_t{1} << 52) / r, ErrorKind::BudgetExceeded, "tuple space too large");
    size_ *= r;
  }
}

std::int64_t TupleIndex::encode(const std::vector<int>& t) const {
  std::int64_t i = 0;
  for (std::size_t k = 0; k < radices_.size(); ++k) i = i * radices_[k] + t[k];
  return i;
}

std::vector<int> TupleIndex::decode(std::int64_t i) const {
  std::vector<int> t(radices_.size());
  for (std::size_t k = radices_.size(); k-- > 0;) {
    t[k] = static_cast<int>(i % radices_[k]);
    i /= radices_[k];
  }
  return t;
}

std::vector<int> Game::question_sizes() const {
  std::vector<int> s;
  for (const auto& q : questions) s.push_back(static_cast<int>(q.size()));
  return s;
}

std::vector<int> Game::answer_sizes() const {
  std::vector<int> s;
  for (const auto& a : answers) s.push_back(static_cast<int>(a.size()));
  return s;
}

namespace {

std::int64_t tuple_count(const std::vector<int>& sizes) {
  std::int64_t n = 1;
  for (int s : sizes) n *= s;
  return n;
}

std::int64_t tuple_count(const std::vector<std::vector<std::string>>& labels) {
  std::int64_t n = 1;
  for (const auto& l : labels) n *= static_cast<std::int64_t>(l.size());
  return n;
}

}  // namespace

double Game::payoff(std::int64_t q, std::int64_t a) const {
  return v[static_cast<std::size_t>(q * tuple_count(answers) + a)];
}

void Game::validate() const {
  require(players() >= 1, ErrorKind::InvalidInput, "game needs at least one player");
  require(answers.size() == questions.size(), ErrorKind::InvalidInput, "question and answer lists differ in length");
  for (int i = 0; i < players(); ++i)
    require(!questions[i].empty() && !answers[i].empty(), ErrorKind::InvalidInput,
            "every player needs questions and answers");
  const std::int64_t nq = question_index().size(), na = answer_index().size();
  require(static_cast<std::int64_t>(pi.size()) == nq, ErrorKind::DimensionMismatch, "pi has the wrong size");
  require(static_cast<std::int64_t>(v.size()) == nq * na, ErrorKind::DimensionMismatch, "V has the wrong size");
  double total = 0;
  for (double x : pi) {
    require(std::isfinite(x) && x >= 0, ErrorKind::InvalidInput, "pi entries must be nonnegative");
    total += x;
  }
  require(std::abs(total - 1) <= 1e-9, ErrorKind::InvalidInput, "pi must sum to one");
  for (double x : v)
    require(std::isfinite(x) && x >= -1e-12 && x <= 1 + 1e-12, ErrorKind::InvalidInput,
            "payoff entries must lie in [0, 1]");
}

Game Game::with_sizes(const std::vector<int>& q_sizes, const std::vector<int>& a_sizes) {
  Game g;
  auto labels = [](int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  };
  for (int s : q_sizes) g.questions.push_back(labels(s));
  for (int s : a_sizes) g.answers.push_back(labels(s));
  const std::int64_t nq = g.question_index().size(), na = g.answer_index().size();
  g.pi.assign(static_cast<std::size_t>(nq), 1.0 / static_cast<double>(nq));
  g.v.assign(static_cast<std::size_t>(nq * na), 0.0);
  return g;
}

Game chsh() {
  Game g = Game::with_sizes({2, 2}, {2, 2});
  for (int r = 0; r < 2; ++r)
    for (int q = 0; q < 2; ++q)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g.v[(r * 2 + q) * 4 + a * 2 + b] = ((a ^ b) == (r & q)) ? 1.0 : 0.0;
  return g;
}

std::optional<std::vector<std::vector<double>>> product_factors(const Game& g, double tol) {
  const TupleIndex qi = g.question_index();
  const auto sizes = g.question_sizes();
  std::vector<std::vector<double>> marg;
  for (int s : sizes) marg.emplace_back(s, 0.0);
  for (std::int64_t q = 0; q < qi.size(); ++q) {
    const auto t = qi.decode(q);
    for (int i = 0; i < g.players(); ++i) marg[i][t[i]] += g.pi[q];
  }
  for (std::int64_t q = 0; q < qi.size(); ++q) {
    const auto t = qi.decode(q);
    double prod = 1;
    for (int i = 0; i < g.players(); ++i) prod *= marg[i][t[i]];
    if (std::abs(prod - g.pi[q]) > tol) return std::nullopt;
  }
  return marg;
}

double NsBox::prob(std::int64_t q, std::int64_t a) const {
  return p[static_cast<std::size_t>(q * tuple_count(answer_sizes) + a)];
}

double NsBox::violation() const {
  const TupleIndex qi(question_sizes), ai(answer_sizes);
  require(static_cast<std::int64_t>(p.size()) == qi.size() * ai.size(), ErrorKind::DimensionMismatch,
          "box table has the wrong size");
  const int n = static_cast<int>(question_sizes.size());
  double worst = 0;
  for (double x : p) worst = std::max(worst, -x);
  for (std::int64_t q = 0; q < qi.size(); ++q) {
    double s = 0;
    for (std::int64_t a = 0; a < ai.size(); ++a) s += prob(q, a);
    worst = std::max(worst, std::abs(s - 1));
  }
  // For each player i: the marginal of the others must not depend on q_i.
  for (int i = 0; i < n; ++i) {
    for (std::int64_t q = 0; q < qi.size(); ++q) {
      auto qt = qi.decode(q);
      if (qt[i] == 0) continue;
      auto q0 = qt;
      q0[i] = 0;
      const std::int64_t qref = qi.encode(q0);
      std::map<std::int64_t, double> diff;
      for (std::int64_t a = 0; a < ai.size(); ++a) {
        auto at = ai.decode(a);
        at[i] = 0;
        const std::int64_t key = ai.encode(at);
        diff[key] += prob(q, a) - prob(qref, a);
      }
      for (const auto& [key, d] : diff) worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

void NsBox::validate(double tol) const {
  const double v = violation();
  require(v <= tol, ErrorKind::InvalidInput,
          "box violates positivity, normalisation or non-signalling by " + std::to_string(v));
}

GameValue classical_value(const Game& g, const Budget& budget) {
  g.validate();
  const int n = g.players();
  const auto qs = g.question_sizes(), as = g.answer_sizes();
  // Enumerate strategies of all but the last player; the last best-responds.
  double count = 1;
  for (int i = 0; i + 1 < n; ++i) count *= std::pow(static_cast<double>(as[i]), qs[i]);
  budget.check_tuples(count * static_cast<double>(g.question_index().size()), "deterministic strategies");
  const TupleIndex qi = g.question_index(), ai = g.answer_index();
  const int last = n - 1;
  std::vector<std::vector<int>> qdec(qi.size());
  for (std::int64_t q = 0; q < qi.size(); ++q) qdec[q] = qi.decode(q);

  std::vector<std::vector<int>> strat(n);
  for (int i = 0; i < n; ++i) strat[i].assign(qs[i], 0);
  GameValue best;
  best.value = -1;
  std::vector<double> score(static_cast<std::size_t>(qs[last] * as[last]));
  std::vector<int> at(n);
  while (true) {
    std::fill(score.begin(), score.end(), 0.0);
    for (std::int64_t q = 0; q < qi.size(); ++q) {
      const double w = g.pi[q];
      if (w == 0) continue;
      const auto& qt = qdec[q];
      for (int i = 0; i < last; ++i) at[i] = strat[i][qt[i]];
      for (int al = 0; al < as[last]; ++al) {
        at[last] = al;
        score[qt[last] * as[last] + al] += w * g.v[static_cast<std::size_t>(q * ai.size() + ai.encode(at))];
      }
    }
    double total = 0;
    std::vector<int> resp(qs[last]);
    for (int ql = 0; ql < qs[last]; ++ql) {
      const auto row = score.begin() + ql * as[last];
      const auto it = std::max_element(row, row + as[last]);
      resp[ql] = static_cast<int>(it - row);
      total += *it;
    }
    if (total > best.value + 1e-15) {
      best.value = total;
      best.strategy = strat;
      best.strategy[last] = resp;
    }
    // Odometer over the enumerated players' strategies.
    int i = 0, j = 0;
    for (i = 0; i < last; ++i) {
      for (j = 0; j < qs[i]; ++j) {
        if (++strat[i][j] < as[i]) break;
        strat[i][j] = 0;
      }
      if (j < qs[i]) break;
    }
    if (i == last) break;
  }
  return best;
}

namespace {

NsBox box_from(const std::vector<int>& qs, const std::vector<int>& as, std::vector<double> p) {
  NsBox box{qs, as, std::move(p)};
  for (double& x : box.p)
    if (x < 0 && x > -1e-12) x = 0;
  box.validate(1e-8);
  return box;
}

void require_optimal(const LpSolution& sol, const std::string& what) {
  require(sol.status == LpStatus::Optimal, ErrorKind::InvalidInput, what + " LP ended " + to_string(sol.status));
}

}  // namespace

GameValue ns_value(const Game& g, const Budget& budget) {
  g.validate();
  const TupleIndex qi = g.question_index(), ai = g.answer_index();
  const std::int64_t nq = qi.size(), na = ai.size();
  budget.check_lp_vars(static_cast<double>(nq * na), "non-signalling LP");
  const int n = g.players();
  LpBuilder lp;
  lp.add_variables(static_cast<int>(nq * na));
  auto var = [&](std::int64_t q, std::int64_t a) { return static_cast<int>(q * na + a); };
  for (std::int64_t q = 0; q < nq; ++q)
    for (std::int64_t a = 0; a < na; ++a) lp.set_objective(var(q, a), g.pi[q] * g.payoff(q, a));
  for (std::int64_t q = 0; q < nq; ++q) {
    std::vector<std::pair<int, double>> row;
    for (std::int64_t a = 0; a < na; ++a) row.push_back({var(q, a), 1.0});
    lp.add_row(row, LpBuilder::Sense::Eq, 1.0);
  }
  for (int i = 0; i < n; ++i) {
    for (std::int64_t q = 0; q < nq; ++q) {
      auto qt = qi.decode(q);
      if (qt[i] == 0) continue;
      qt[i] = 0;
      const std::int64_t qref = qi.encode(qt);
      // One row per answer tuple of the other players.
      std::map<std::int64_t, std::vector<std::pair<int, double>>> rows;
      for (std::int64_t a = 0; a < na; ++a) {
        auto at = ai.decode(a);
        at[i] = 0;
        auto& row = rows[ai.encode(at)];
        row.push_back({var(q, a), 1.0});
        row.push_back({var(qref, a), -1.0});
      }
      for (auto& [key, row] : rows) lp.add_row(row, LpBuilder::Sense::Eq, 0.0);
    }
  }
  const LpSolution sol = lp.solve();
  require_optimal(sol, "non-signalling");
  GameValue out;
  out.value = sol.value;
  out.box = box_from(g.question_sizes(), g.answer_sizes(), std::vector<double>(sol.x.data(), sol.x.data() + sol.x.size()));
  return out;
}

Game extend_game(const Game& g, int m, const Budget& budget) {
  g.validate();
  require(g.players() == 2, ErrorKind::InvalidInput, "extension needs a two-player game");
  require(m >= 1, ErrorKind::InvalidInput, "extension count must be at least 1");
  const auto marg = product_factors(g, 1e-12);
  require(marg.has_value(), ErrorKind::NonFreeGame, "question distribution is not a product");
  const int nq = static_cast<int>(g.questions[1].size());
  const int na = static_cast<int>(g.answers[0].size()), nb = static_cast<int>(g.answers[1].size());
  Game e;
  e.questions.push_back(g.questions[0]);
  e.answers.push_back(g.answers[0]);
  for (int k = 0; k < m; ++k) {
    e.questions.push_back(g.questions[1]);
    e.answers.push_back(g.answers[1]);
  }
  const TupleIndex qi = e.question_index(), ai = e.answer_index();
  budget.check_tuples(static_cast<double>(qi.size()) * static_cast<double>(ai.size()),
                                          "extended game table");
  e.pi.assign(static_cast<std::size_t>(qi.size()), 0.0);
  e.v.assign(static_cast<std::size_t>(qi.size() * ai.size()), 0.0);
  for (std::int64_t q = 0; q < qi.size(); ++q) {
    const auto qt = qi.decode(q);
    double w = (*marg)[0][qt[0]];
    for (int k = 1; k <= m; ++k) w *= (*marg)[1][qt[k]];
    e.pi[q] = w;
    for (std::int64_t a = 0; a < ai.size(); ++a) {
      const auto at = ai.decode(a);
      double s = 0;
      for (int k = 1; k <= m; ++k) {
        const std::int64_t q0 = static_cast<std::int64_t>(qt[0]) * nq + qt[k];
        s += g.v[static_cast<std::size_t>(q0 * (na * nb) + at[0] * nb + at[k])];
      }
      e.v[static_cast<std::size_t>(q * ai.size() + a)] = s / m;
    }
  }
  return e;
}

GameValue k_extendible_ns_value(const Game& g, int m, const Budget& budget) {
  g.validate();
  require(g.players() == 2, ErrorKind::InvalidInput, "extendible value needs a two-player game");
  require(m >= 1, ErrorKind::InvalidInput, "extension count must be at least 1");
  const int nr = static_cast<int>(g.questions[0].size()), nq = static_cast<int>(g.questions[1].size());
  const int na = static_cast<int>(g.answers[0].size()), nb = static_cast<int>(g.answers[1].size());
  const int pairs = nb * nq;  // (b, q) pair index c = b * nq + q
  const double seqs = std::pow(static_cast<double>(pairs), m);
  budget.check_tuples(seqs * nr * na, "extendible box table");

  // Orbit variables: (r, a, multiset of (b_k, q_k) pairs).
  std::map<std::vector<int>, int> ms_index;
  {
    std::vector<int> cur(m, 0);
    while (true) {
      ms_index.emplace(cur, static_cast<int>(ms_index.size()));
      int i = m - 1;
      while (i >= 0 && cur[i] == pairs - 1) --i;
      if (i < 0) break;
      ++cur[i];
      for (int j = i + 1; j < m; ++j) cur[j] = cur[i];
    }
  }
  const int nms = static_cast<int>(ms_index.size());
  budget.check_lp_vars(static_cast<double>(nr) * na * nms, "extendible LP");
  auto var = [&](int r, int a, std::vector<int> seq) {
    std::sort(seq.begin(), seq.end());
    return (r * na + a) * nms + ms_index.at(seq);
  };
  LpBuilder lp;
  lp.add_variables(nr * na * nms);

  std::set<std::pair<std::vector<std::pair<int, double>>, double>> seen;
  auto add = [&](std::map<int, double> terms, double rhs) {
    std::vector<std::pair<int, double>> row;
    for (const auto& [v, c] : terms)
      if (c != 0) row.push_back({v, c});
    if (row.empty()) return;
    if (rhs == 0 && row.front().second < 0)
      for (auto& t : row) t.second = -t.second;
    if (seen.insert({row, rhs}).second) lp.add_row(row, LpBuilder::Sense::Eq, rhs);
  };

  const TupleIndex qseq(std::vector<int>(m, nq)), bseq(std::vector<int>(m, nb));
  auto pair_seq = [&](const std::vector<int>& b, const std::vector<int>& q) {
    std::vector<int> c(m);
    for (int k = 0; k < m; ++k) c[k] = b[k] * nq + q[k];
    return c;
  };
  // Normalisation per (r, q-vector), q sorted.
  for (int r = 0; r < nr; ++r)
    for (std::int64_t qv = 0; qv < qseq.size(); ++qv) {
      const auto q = qseq.decode(qv);
      if (!std::is_sorted(q.begin(), q.end())) continue;
      std::map<int, double> terms;
      for (int a = 0; a < na; ++a)
        for (std::int64_t bv = 0; bv < bseq.size(); ++bv) terms[var(r, a, pair_seq(bseq.decode(bv), q))] += 1;
      add(terms, 1.0);
    }
  // Player 1 cannot signal: sum_a p(a, b | r, q) independent of r.
  for (int r = 1; r < nr; ++r)
    for (std::int64_t qv = 0; qv < qseq.size(); ++qv)
      for (std::int64_t bv = 0; bv < bseq.size(); ++bv) {
        const auto c = pair_seq(bseq.decode(bv), qseq.decode(qv));
        std::map<int, double> terms;
        for (int a = 0; a < na; ++a) {
          terms[var(r, a, c)] += 1;
          terms[var(0, a, c)] -= 1;
        }
        add(terms, 0.0);
      }
  // The first extension player cannot signal; the rest follow by symmetry.
  for (int r = 0; r < nr; ++r)
    for (int a = 0; a < na; ++a)
      for (std::int64_t qv = 0; qv < qseq.size(); ++qv) {
        const auto q = qseq.decode(qv);
        if (q[0] == 0) continue;
        auto q0 = q;
        q0[0] = 0;
        for (std::int64_t bv = 0; bv < bseq.size(); ++bv) {
          const auto b = bseq.decode(bv);
          if (b[0] != 0) continue;
          std::map<int, double> terms;
          for (int b1 = 0; b1 < nb; ++b1) {
            auto bb = b;
            bb[0] = b1;
            terms[var(r, a, pair_seq(bb, q))] += 1;
            terms[var(r, a, pair_seq(bb, q0))] -= 1;
          }
          add(terms, 0.0);
        }
      }

  // Marginal on players 1 and 2, with the other extension players asked 0.
  const TupleIndex rest(std::vector<int>(std::max(0, m - 1), nb));
  auto marginal_terms = [&](int r, int q, int a, int b) {
    std::map<int, double> terms;
    for (std::int64_t rv = 0; rv < rest.size(); ++rv) {
      std::vector<int> bs{b}, qs{q};
      const auto tail = rest.decode(rv);
      for (int k = 0; k + 1 < m; ++k) {
        bs.push_back(tail[k]);
        qs.push_back(0);
      }
      terms[var(r, a, pair_seq(bs, qs))] += 1;
    }
    return terms;
  };
  std::map<int, double> objective;
  for (int r = 0; r < nr; ++r)
    for (int q = 0; q < nq; ++q) {
      const std::int64_t qi = static_cast<std::int64_t>(r) * nq + q;
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
          const double w = g.pi[qi] * g.v[static_cast<std::size_t>(qi * na * nb + a * nb + b)];
          if (w == 0) continue;
          for (const auto& [v, c] : marginal_terms(r, q, a, b)) objective[v] += w * c;
        }
    }
  for (const auto& [v, c] : objective) lp.set_objective(v, c);

  const LpSolution sol = lp.solve();
  require_optimal(sol, "extendible non-signalling");
  GameValue out;
  out.value = sol.value;
  std::vector<double> p(static_cast<std::size_t>(nr * nq * na * nb), 0.0);
  for (int r = 0; r < nr; ++r)
    for (int q = 0; q < nq; ++q)
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
          double s = 0;
          for (const auto& [v, c] : marginal_terms(r, q, a, b)) s += c * sol.x(v);
          p[static_cast<std::size_t>((r * nq + q) * na * nb + a * nb + b)] = s;
        }
  out.box = box_from({nr, nq}, {na, nb}, std::move(p));
  return out;
}

double extendible_gap_bound(int answers, int m) {
  require(answers >= 1 && m >= 1, ErrorKind::InvalidInput, "need |A| >= 1 and m >= 1");
  return std::sqrt(std::log(static_cast<double>(answers)) / (2.0 * m));
}

double lhv_rounding_bound(int answers, int k) {
  require(answers >= 1 && k >= 1, ErrorKind::InvalidInput, "need |X| >= 1 and k >= 1");
  return std::sqrt(2 * std::log(static_cast<double>(answers)) / k);
}

int free_game_level(const Game& g, double eps) {
  require(eps > 0 && !std::isnan(eps), ErrorKind::InvalidInput, "eps must be positive");
  const double la = std::log(static_cast<double>(g.answers.at(0).size()));
  const double m = std::ceil(la / (2 * eps * eps));
  if (!(m < INT_MAX)) return INT_MAX;
  return std::max(1, static_cast<int>(m));
}

FreeGameEstimate free_game_value(const Game& g, double eps, std::optional<int> m_cap, const Budget& budget) {
  g.validate();
  require(g.players() == 2, ErrorKind::InvalidInput, "free-game value needs a two-player game");
  require(product_factors(g, 1e-12).has_value(), ErrorKind::NonFreeGame, "question distribution is not a product");
  FreeGameEstimate out;
  out.m_scheduled = free_game_level(g, eps);
  out.m = out.m_scheduled;
  if (m_cap) {
    require(*m_cap >= 1, ErrorKind::InvalidInput, "m cap must be at least 1");
    if (*m_cap < out.m) {
      out.m = *m_cap;
      out.capped = true;
    }
  }
  out.eps_effective = out.capped ? extendible_gap_bound(static_cast<int>(g.answers[0].size()), out.m) : eps;
  out.estimate = k_extendible_ns_value(g, out.m, budget).value;
  return out;
}

NsBox LhvModel::box(const std::vector<int>& question_sizes, const std::vector<int>& answer_sizes) const {
  const TupleIndex qi(question_sizes), ai(answer_sizes);
  NsBox b{question_sizes, answer_sizes, std::vector<double>(static_cast<std::size_t>(qi.size() * ai.size()), 0.0)};
  const int n = static_cast<int>(question_sizes.size());
  for (std::size_t s = 0; s < weights.size(); ++s)
    for (std::int64_t q = 0; q < qi.size(); ++q) {
      const auto qt = qi.decode(q);
      std::vector<int> at(n);
      for (int i = 0; i < n; ++i) at[i] = strategies[s][i][qt[i]];
      b.p[static_cast<std::size_t>(q * ai.size() + ai.encode(at))] += weights[s];
    }
  return b;
}

LhvDistance nearest_lhv(const NsBox& p, const std::vector<double>& mu, const Budget& budget) {
  require(p.question_sizes.size() == 2 && p.answer_sizes.size() == 2, ErrorKind::InvalidInput,
          "nearest LHV needs a two-player box");
  p.validate(1e-8);
  const int nr = p.question_sizes[0], nq = p.question_sizes[1];
  const int nx = p.answer_sizes[0], ny = p.answer_sizes[1];
  require(static_cast<int>(mu.size()) == nr, ErrorKind::DimensionMismatch, "mu must cover the first player's questions");
  double total = 0;
  for (double w : mu) {
    require(std::isfinite(w) && w >= 0, ErrorKind::InvalidInput, "mu entries must be nonnegative");
    total += w;
  }
  require(std::abs(total - 1) <= 1e-9, ErrorKind::InvalidInput, "mu must sum to one");
  const double sa = std::pow(static_cast<double>(nx), nr), sb = std::pow(static_cast<double>(ny), nq);
  budget.check_tuples(sa * sb, "deterministic strategy pairs");
  budget.check_lp_vars(sa * sb + 1 + nr * nq * nx * ny, "nearest LHV LP");
  const TupleIndex fa(std::vector<int>(nr, nx)), fb(std::vector<int>(nq, ny));
  const int ns = static_cast<int>(fa.size() * fb.size());

  LpBuilder lp;
  const int w0 = lp.add_variables(ns);
  const int t = lp.add_variable(-1.0);
  const int s0 = lp.add_variables(nr * nq * nx * ny);
  auto slack = [&](int r, int q, int x, int y) { return s0 + ((r * nq + q) * nx + x) * ny + y; };
  {
    std::vector<std::pair<int, double>> row;
    for (int s = 0; s < ns; ++s) row.push_back({w0 + s, 1.0});
    lp.add_row(row, LpBuilder::Sense::Eq, 1.0);
  }
  std::vector<std::vector<int>> sa_dec(fa.size()), sb_dec(fb.size());
  for (std::int64_t i = 0; i < fa.size(); ++i) sa_dec[i] = fa.decode(i);
  for (std::int64_t i = 0; i < fb.size(); ++i) sb_dec[i] = fb.decode(i);
  for (int r = 0; r < nr; ++r)
    for (int q = 0; q < nq; ++q)
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
          const double target = p.prob(r * nq + q, x * ny + y);
          std::vector<std::pair<int, double>> hi{{slack(r, q, x, y), 1.0}}, lo{{slack(r, q, x, y), 1.0}};
          for (int s = 0; s < ns; ++s) {
            const int i = s / static_cast<int>(fb.size()), j = s % static_cast<int>(fb.size());
            if (sa_dec[i][r] == x && sb_dec[j][q] == y) {
              hi.push_back({w0 + s, 1.0});
              lo.push_back({w0 + s, -1.0});
            }
          }
          lp.add_row(hi, LpBuilder::Sense::Ge, target);   // s >= p - q
          lp.add_row(lo, LpBuilder::Sense::Ge, -target);  // s >= q - p
        }
  for (int q = 0; q < nq; ++q) {
    std::vector<std::pair<int, double>> row{{t, 1.0}};
    for (int r = 0; r < nr; ++r)
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) row.push_back({slack(r, q, x, y), -mu[r]});
    lp.add_row(row, LpBuilder::Sense::Ge, 0.0);
  }
  const LpSolution sol = lp.solve();
  require_optimal(sol, "nearest LHV");
  LhvDistance out;
  out.distance = sol.x(t);
  for (int s = 0; s < ns; ++s) {
    const double w = sol.x(w0 + s);
    if (w <= 1e-12) continue;
    const int i = s / static_cast<int>(fb.size()), j = s % static_cast<int>(fb.size());
    out.model.weights.push_back(w);
    out.model.strategies.push_back({sa_dec[i], sb_dec[j]});
  }
  return out;
}

}  // namespace definetti
