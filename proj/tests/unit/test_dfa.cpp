#include "doctest.h"
#include "oracles.hpp"
#include "tracekit/dfa.hpp"

using namespace tracekit;

namespace {

Dfa random_dfa(std::mt19937_64& rng, std::size_t states, std::size_t k) {
  Dfa d(oracle::letters(k), states, 0);
  for (Dfa::State s = 0; s < states; ++s) {
    d.set_accepting(s, rng() % 2);
    for (std::size_t a = 0; a < k; ++a) {
      auto t = rng() % (states + 1);
      d.set_transition(s, a, t == states ? Dfa::kNone : static_cast<Dfa::State>(t));
    }
  }
  return d;
}

bool same_language_upto(const Dfa& x, const Dfa& y, std::size_t len) {
  oracle::WordTable table(x.alphabet(), len);
  for (const auto& w : table.words)
    if (run_dfa(x, w) != run_dfa(y, w)) return false;
  return true;
}

// Every uabv / ubav pair with a, b independent and |uabv| <= len.
bool closed_upto(const Dfa& d, const DependenceRelation& dep, std::size_t len) {
  oracle::WordTable table(d.alphabet(), len);
  for (const auto& w : table.words)
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == w[i + 1] || dep.depends(w[i], w[i + 1])) continue;
      Word s = w;
      std::swap(s[i], s[i + 1]);
      if (run_dfa(d, w) != run_dfa(d, s)) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("dfa basics") {
  Dfa d({ActionId("b"), ActionId("a")}, 2, 0);
  CHECK(d.alphabet() == std::vector<ActionId>{ActionId("a"), ActionId("b")});
  d.set_transition(0, ActionId("a"), 1);
  d.set_accepting(1);
  CHECK(run_dfa(d, {ActionId("a")}));
  CHECK_FALSE(run_dfa(d, {ActionId("a"), ActionId("a")}));
  CHECK_FALSE(run_dfa(d, {}));
  CHECK_THROWS_AS(run_dfa(d, {ActionId("z")}), InputError);
  CHECK_THROWS_AS(d.set_accepting(5), InputError);
  CHECK_THROWS_AS(Dfa(oracle::letters(1), 0, 0), InputError);
  CHECK(d.state_name(1) == "q1");
}

TEST_CASE("minimize keeps the language and reaches the Myhill-Nerode size") {
  std::mt19937_64 rng(oracle::seed_from_env());
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 5, k = 1 + rng() % 3;
    Dfa d = random_dfa(rng, n, k);
    Dfa m = minimize(d);
    CHECK(same_language_upto(d, m, 6));
    CHECK(m.num_states() == oracle::myhill_nerode_classes(d));
    CHECK(isomorphic(minimize(m), m));
  }
}

TEST_CASE("minimal automata of equal languages are isomorphic") {
  // (ab)* written with redundant states.
  Dfa big(oracle::letters(2), 4, 0);
  big.set_accepting(0);
  big.set_accepting(2);
  big.set_transition(0, ActionId("a"), 1);
  big.set_transition(1, ActionId("b"), 2);
  big.set_transition(2, ActionId("a"), 3);
  big.set_transition(3, ActionId("b"), 0);
  Dfa small(oracle::letters(2), 2, 0);
  small.set_accepting(0);
  small.set_transition(0, ActionId("a"), 1);
  small.set_transition(1, ActionId("b"), 0);
  CHECK(isomorphic(minimize(big), small));
  CHECK(minimize(big).num_states() == 2);
}

TEST_CASE("empty language minimizes to one state") {
  Dfa d(oracle::letters(2), 3, 0);
  d.set_transition(0, ActionId("a"), 1);
  d.set_transition(1, ActionId("b"), 2);
  auto m = minimize(d);
  CHECK(m.num_states() == 1);
  CHECK_FALSE(m.accepting(0));
}

TEST_CASE("trace closure: a.b versus a||b") {
  auto indep = DependenceRelation::from_pairs(oracle::letters(2), {});
  auto dep = DependenceRelation::from_pairs(oracle::letters(2), {{ActionId("a"), ActionId("b")}});
  Dfa ab(oracle::letters(2), 3, 0);
  ab.set_transition(0, ActionId("a"), 1);
  ab.set_transition(1, ActionId("b"), 2);
  ab.set_accepting(2);
  CHECK_FALSE(is_trace_closed(ab, dep));
  auto w = is_trace_closed(ab, indep);
  REQUIRE(w);
  CHECK(w->prefix.empty());
  CHECK(w->first == ActionId("a"));
  CHECK(w->second == ActionId("b"));
  CHECK(w->suffix.empty());
  CHECK(w->first_order_accepted);
  CHECK(run_dfa(ab, w->first_order()) != run_dfa(ab, w->second_order()));
  CHECK(w->to_string() == "u=[] a=a b=b v=[] (uabv accepted)");
}

TEST_CASE("trace closure rejects letters outside the relation") {
  Dfa d(oracle::letters(2), 1, 0);
  auto dep = DependenceRelation::from_pairs({ActionId("a")}, {});
  CHECK_THROWS_AS(is_trace_closed(d, dep), InputError);
}

TEST_CASE("trace closure agrees with bounded swap checks on random automata") {
  std::mt19937_64 rng(oracle::seed_from_env() + 7);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 1 + rng() % 3, k = 2 + rng() % 2;
    Dfa d = random_dfa(rng, n, k);
    auto dep = oracle::random_dependence(d.alphabet(), rng);
    auto witness = is_trace_closed(d, dep);
    CHECK(witness.has_value() == !closed_upto(d, dep, 6));
    if (witness) {
      CHECK(run_dfa(d, witness->first_order()) == witness->first_order_accepted);
      CHECK(run_dfa(d, witness->second_order()) != witness->first_order_accepted);
      CHECK(dep.independent(witness->first, witness->second));
    }
  }
}
