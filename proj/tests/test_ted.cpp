#include <doctest.h>

#include "fixtures.hpp"

using namespace uiforge;

TEST_CASE("identity and single deletion") {
  const UiTree card = UiTree::from_spec(fx::card("a"));
  CHECK(tree_edit_distance(card, card) == 0);
  NodeSpec smaller = fx::card("a");
  smaller.children.erase(smaller.children.begin());
  CHECK(card.size() == 5);
  CHECK(tree_edit_distance(card, UiTree::from_spec(smaller)) == 1);
}

TEST_CASE("label modes") {
  const UiTree a = UiTree::from_spec(fx::card("a"));
  const UiTree b = UiTree::from_spec(fx::card("b"));
  CHECK(tree_edit_distance(a, b) == 0);
  CHECK(tree_edit_distance(a, b, LabelMode::Strict) == 4);
}

TEST_CASE("matches the Tai mapping oracle on random small trees") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const int na = 1 + static_cast<int>(rng() % 6);
    const int nb = 1 + static_cast<int>(rng() % 6);
    const LabeledTree a = fx::random_labeled(rng, na);
    const LabeledTree b = fx::random_labeled(rng, nb);
    const int want = fx::brute_force_ted(a, b);
    CHECK(tree_edit_distance(a, b) == want);
    CHECK(tree_edit_distance(b, a) == want);
    CHECK(edit_mapping(a, b).cost == want);
  }
}

TEST_CASE("metric laws on sampled triples") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const LabeledTree a = fx::random_labeled(rng, 1 + static_cast<int>(rng() % 8));
    const LabeledTree b = fx::random_labeled(rng, 1 + static_cast<int>(rng() % 8));
    const LabeledTree c = fx::random_labeled(rng, 1 + static_cast<int>(rng() % 8));
    CHECK(tree_edit_distance(a, a) == 0);
    CHECK(tree_edit_distance(a, b) == tree_edit_distance(b, a));
    CHECK(tree_edit_distance(a, c) <= tree_edit_distance(a, b) + tree_edit_distance(b, c));
  }
}

TEST_CASE("edit mapping is consistent with its cost") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const LabeledTree a = fx::random_labeled(rng, 1 + static_cast<int>(rng() % 7));
    const LabeledTree b = fx::random_labeled(rng, 1 + static_cast<int>(rng() % 7));
    const EditMapping m = edit_mapping(a, b);
    int relabel = 0;
    for (auto [u, v] : m.pairs) relabel += a.labels[static_cast<std::size_t>(u)] != b.labels[static_cast<std::size_t>(v)];
    const int kept = static_cast<int>(m.pairs.size());
    CHECK(m.cost == relabel + (a.size() - kept) + (b.size() - kept));
  }
}
