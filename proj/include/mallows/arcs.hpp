#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mallows/errors.hpp"
#include "mallows/permutation.hpp"

namespace mallows {

struct ArcEvent {
  enum class Kind { merge, close };
  int step;
  Kind kind;
  // merge: {id of the arc tailed at `step`, id of the arc headed at Y_step};
  // the merged arc keeps the first id. close: {id of the closing arc}.
  std::vector<int> arc_ids;
  int head;  // of the resulting arc
  int tail;
};

const char* to_string(ArcEvent::Kind kind);

// Open/closed arc partition of [n] while symbols n, n-1, ..., 1 are placed.
// An open arc (a_1, ..., a_s) at step l has Y_{a_i} = a_{i+1}, a_1 an unused
// place (its head) and a_s <= l - 1 (its tail). Arc membership lives in a
// union-find whose roots carry head, tail and closed flag; sequences are
// rebuilt from the placements on demand.
class ArcTracker {
 public:
  explicit ArcTracker(std::span<const double> b, bool log_events = false);

  int size() const { return n_; }
  // Current step l: n + 1 before any placement, 1 when done.
  int step() const { return step_; }

  // Step l transition: symbol l = step() - 1 is placed at `place`.
  // std::invalid_argument if l is not the next step or `place` is ineligible;
  // InvariantError if the arc preconditions fail.
  void transition(int l, int place);

  // Arcs containing x.
  int head_of(int x) const;
  int tail_of(int x) const;
  bool in_closed_arc(int x) const;

  // Sequences (a_1, ..., a_s), ordered by head.
  std::vector<std::vector<int>> open_arcs() const;
  // Cyclic sequences following Y, rotated to start at their minimum, ordered by minimum.
  std::vector<std::vector<int>> closed_arcs() const;

  const std::vector<ArcEvent>& events() const { return events_; }

  // Y_k for placed symbols k >= step(), 0 otherwise.
  int placement(int symbol) const { return y_[static_cast<std::size_t>(symbol - 1)]; }
  bool used(int place) const { return used_[static_cast<std::size_t>(place - 1)] != 0; }
  double cutoff(int place) const { return b_[static_cast<std::size_t>(place - 1)]; }

 private:
  int find(int x) const;
  void check_index(int x) const;

  int n_;
  int step_;
  std::vector<double> b_;
  std::vector<int> y_;
  std::vector<char> used_;
  mutable std::vector<int> parent_;
  std::vector<int> rank_;
  // Indexed by union-find root.
  std::vector<int> head_;
  std::vector<int> tail_;
  std::vector<int> id_;
  std::vector<char> closed_;
  bool log_events_;
  std::vector<ArcEvent> events_;
};

struct HeadSets {
  std::vector<int> tails;      // H'_l: tails of open arcs whose head h has b_h >= l, ascending
  std::vector<int> below;      // H_l = {j <= l - 1 : b_j >= l}, ascending
};

// Head availability for the next transition l = tracker.step() - 1.
HeadSets available_heads(const ArcTracker& tracker);

struct ReplayReport {
  std::int64_t steps_checked = 0;
  std::int64_t violations = 0;
  std::vector<std::string> messages;  // first few violations
};

// Replays a full placement pass (y[k-1] = Y_k) and checks, at every step: open
// and closed arcs partition [n]; |H'_l| = N_l, |H_l| = N_l - 1, H'_l = H_l u {l};
// and at the end that closed arcs are the cycles of the inverse of the output.
ReplayReport replay_and_check(std::span<const double> b, std::span<const int> y);

struct TrackWalk {
  int s = 0;
  std::vector<int> w;  // W_0, ..., W_T
  std::vector<int> z;  // Z_0, ..., Z_T
  int t_stop = 0;      // T = min{t : W_t = 0}

  int terminal() const { return z[static_cast<std::size_t>(t_stop - 1)]; }
};

// Follows the tail of the open arc holding s, evaluated at step Z_{t-1}, until
// s sits in a closed arc. The terminal Z_{T-1} is min C_s(output).
TrackWalk track_walk(int s, std::span<const double> b, std::span<const int> y);

}  // namespace mallows
