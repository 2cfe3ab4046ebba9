#include "mallows/arcs.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "mallows/sampler.hpp"

namespace mallows {

const char* to_string(ArcEvent::Kind kind) { return kind == ArcEvent::Kind::merge ? "merge" : "close"; }

ArcTracker::ArcTracker(std::span<const double> b, bool log_events)
    : n_(static_cast<int>(b.size())),
      step_(n_ + 1),
      b_(b.begin(), b.end()),
      y_(b.size(), 0),
      used_(b.size(), 0),
      parent_(b.size()),
      rank_(b.size(), 0),
      head_(b.size()),
      tail_(b.size()),
      id_(b.size()),
      closed_(b.size(), 0),
      log_events_(log_events) {
  if (n_ < 1) throw std::invalid_argument("ArcTracker: empty cutoff vector");
  for (int x = 1; x <= n_; ++x) {
    const auto i = static_cast<std::size_t>(x - 1);
    parent_[i] = x;
    head_[i] = x;
    tail_[i] = x;
    id_[i] = x;
  }
}

void ArcTracker::check_index(int x) const {
  if (x < 1 || x > n_) throw std::invalid_argument("ArcTracker: index " + std::to_string(x) + " outside [n]");
}

int ArcTracker::find(int x) const {
  int root = x;
  while (parent_[static_cast<std::size_t>(root - 1)] != root) root = parent_[static_cast<std::size_t>(root - 1)];
  while (x != root) {
    auto& p = parent_[static_cast<std::size_t>(x - 1)];
    x = std::exchange(p, root);
  }
  return root;
}

int ArcTracker::head_of(int x) const {
  check_index(x);
  return head_[static_cast<std::size_t>(find(x) - 1)];
}

int ArcTracker::tail_of(int x) const {
  check_index(x);
  return tail_[static_cast<std::size_t>(find(x) - 1)];
}

bool ArcTracker::in_closed_arc(int x) const {
  check_index(x);
  return closed_[static_cast<std::size_t>(find(x) - 1)] != 0;
}

void ArcTracker::transition(int l, int place) {
  if (l != step_ - 1 || l < 1)
    throw std::invalid_argument("ArcTracker: expected step " + std::to_string(step_ - 1) + ", got " + std::to_string(l));
  check_index(place);
  const auto pi = static_cast<std::size_t>(place - 1);
  if (used_[pi] || !(b_[pi] >= static_cast<double>(l)))
    throw std::invalid_argument("ArcTracker: place " + std::to_string(place) + " is not eligible for symbol " +
                                std::to_string(l));
  const int ra = find(l);
  const int rc = find(place);
  const auto ia = static_cast<std::size_t>(ra - 1);
  const auto ic = static_cast<std::size_t>(rc - 1);
  if (closed_[ia] || closed_[ic]) throw InvariantError("ArcTracker: transition touches a closed arc");
  if (tail_[ia] != l) throw InvariantError("ArcTracker: symbol " + std::to_string(l) + " is not an open-arc tail");
  if (head_[ic] != place) throw InvariantError("ArcTracker: place " + std::to_string(place) + " is not an open-arc head");

  y_[static_cast<std::size_t>(l - 1)] = place;
  used_[pi] = 1;
  step_ = l;

  if (ra == rc) {
    closed_[ia] = 1;
    if (log_events_) events_.push_back({l, ArcEvent::Kind::close, {id_[ia]}, head_[ia], tail_[ia]});
    return;
  }
  const int head = head_[ia];
  const int tail = tail_[ic];
  const int id = id_[ia];
  const int id_c = id_[ic];
  int root = ra;
  int child = rc;
  if (rank_[static_cast<std::size_t>(root - 1)] < rank_[static_cast<std::size_t>(child - 1)]) std::swap(root, child);
  parent_[static_cast<std::size_t>(child - 1)] = root;
  const auto ir = static_cast<std::size_t>(root - 1);
  if (rank_[ir] == rank_[static_cast<std::size_t>(child - 1)]) ++rank_[ir];
  head_[ir] = head;
  tail_[ir] = tail;
  id_[ir] = id;
  if (log_events_) events_.push_back({l, ArcEvent::Kind::merge, {id, id_c}, head, tail});
}

std::vector<std::vector<int>> ArcTracker::open_arcs() const {
  std::vector<std::vector<int>> arcs;
  for (int h = 1; h <= n_; ++h) {
    if (used(h)) continue;
    auto& arc = arcs.emplace_back();
    int x = h;
    arc.push_back(x);
    while (x >= step_ && static_cast<int>(arc.size()) <= n_) {
      x = placement(x);
      arc.push_back(x);
    }
  }
  return arcs;
}

std::vector<std::vector<int>> ArcTracker::closed_arcs() const {
  std::vector<char> seen(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& arc : open_arcs())
    for (int x : arc) seen[static_cast<std::size_t>(x)] = 1;
  std::vector<std::vector<int>> arcs;
  for (int start = 1; start <= n_; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    auto& arc = arcs.emplace_back();
    for (int x = start; !seen[static_cast<std::size_t>(x)]; x = placement(x)) {
      if (x < step_) throw InvariantError("ArcTracker: closed arc reaches an unplaced symbol");
      seen[static_cast<std::size_t>(x)] = 1;
      arc.push_back(x);
    }
  }
  return arcs;
}

HeadSets available_heads(const ArcTracker& tracker) {
  const int l = tracker.step() - 1;
  if (l < 1) throw std::invalid_argument("available_heads: placement already complete");
  HeadSets sets;
  const auto at_least_l = [&](int x) { return tracker.cutoff(x) >= static_cast<double>(l); };
  for (int j = 1; j <= l - 1; ++j)
    if (at_least_l(j)) sets.below.push_back(j);
  for (int h = 1; h <= tracker.size(); ++h) {
    if (tracker.used(h) || !at_least_l(h)) continue;
    if (tracker.in_closed_arc(h)) throw InvariantError("available_heads: unused place inside a closed arc");
    sets.tails.push_back(tracker.tail_of(h));
  }
  std::ranges::sort(sets.tails);
  return sets;
}

ReplayReport replay_and_check(std::span<const double> b, std::span<const int> y) {
  const int n = static_cast<int>(b.size());
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("replay_and_check: trace length differs from n");
  ReplayReport report;
  auto fail = [&](std::string msg) {
    ++report.violations;
    if (report.messages.size() < 8) report.messages.push_back(std::move(msg));
  };
  const auto counts = counts_from_bounds(b);
  ArcTracker tracker(b);

  auto check_partition = [&] {
    std::vector<int> hits(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& arc : tracker.open_arcs()) {
      for (std::size_t i = 0; i + 1 < arc.size(); ++i)
        if (arc[i] < tracker.step()) fail("open arc interior below step " + std::to_string(tracker.step()));
      if (arc.back() > tracker.step() - 1) fail("open arc tail above step " + std::to_string(tracker.step()));
      for (int x : arc) ++hits[static_cast<std::size_t>(x)];
    }
    for (const auto& arc : tracker.closed_arcs())
      for (int x : arc) ++hits[static_cast<std::size_t>(x)];
    for (int x = 1; x <= n; ++x)
      if (hits[static_cast<std::size_t>(x)] != 1)
        fail("element " + std::to_string(x) + " covered " + std::to_string(hits[static_cast<std::size_t>(x)]) +
             " times at step " + std::to_string(tracker.step()));
  };

  check_partition();
  for (int l = n; l >= 1; --l) {
    const auto sets = available_heads(tracker);
    const int nl = counts[static_cast<std::size_t>(l - 1)];
    if (static_cast<int>(sets.tails.size()) != nl)
      fail("|H'_" + std::to_string(l) + "| = " + std::to_string(sets.tails.size()) + " != N = " + std::to_string(nl));
    if (static_cast<int>(sets.below.size()) != nl - 1)
      fail("|H_" + std::to_string(l) + "| = " + std::to_string(sets.below.size()) + " != N - 1");
    auto expected = sets.below;
    expected.push_back(l);
    if (sets.tails != expected) fail("H'_" + std::to_string(l) + " != H_l u {l}");

    tracker.transition(l, y[static_cast<std::size_t>(l - 1)]);
    check_partition();
    ++report.steps_checked;
  }

  if (!tracker.open_arcs().empty()) fail("open arcs remain after step 1");
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) images[static_cast<std::size_t>(y[static_cast<std::size_t>(k - 1)] - 1)] = k;
  const Permutation sigma(std::move(images));
  if (tracker.closed_arcs() != cycle_decomposition(sigma.inverse())) fail("closed arcs differ from the output cycles");
  return report;
}

TrackWalk track_walk(int s, std::span<const double> b, std::span<const int> y) {
  const int n = static_cast<int>(b.size());
  if (s < 1 || s > n) throw std::invalid_argument("track_walk: s outside [n]");
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("track_walk: trace length differs from n");
  TrackWalk walk;
  walk.s = s;
  walk.w.push_back(1);
  walk.z.push_back(s);
  ArcTracker tracker(b);
  for (int l = n; l >= 1 && walk.w.back() == 1; --l) {
    tracker.transition(l, y[static_cast<std::size_t>(l - 1)]);
    if (l != walk.z.back()) continue;
    if (tracker.in_closed_arc(s)) {
      walk.w.push_back(0);
      walk.z.push_back(walk.z.back());
    } else {
      walk.w.push_back(1);
      walk.z.push_back(tracker.tail_of(s));
    }
  }
  if (walk.w.back() != 0) throw InvariantError("track_walk: walk did not terminate");
  walk.t_stop = static_cast<int>(walk.w.size()) - 1;
  return walk;
}

}  // namespace mallows
