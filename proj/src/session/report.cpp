#include "mentalgen/session/report.hpp"

#include <algorithm>
#include <numeric>

namespace mentalgen::session {

using nlohmann::json;

SatisfactionTrace session_report(const DesignSession& s) {
  if (s.history.empty()) throw StateError("session " + s.session_id + " has no rounds to report");
  SatisfactionTrace t;
  t.session_id = s.session_id;
  t.status = s.status;
  t.round_count = s.history.size();
  for (const auto& r : s.history) {
    if (r.ratings) {
      const auto& v = *r.ratings;
      RoundSatisfaction rs;
      rs.round = r.index;
      rs.mean = static_cast<double>(std::accumulate(v.begin(), v.end(), 0)) / static_cast<double>(v.size());
      rs.max = *std::max_element(v.begin(), v.end());
      rs.selected = *r.selected;
      rs.selected_rating = v[rs.selected];
      t.rounds.push_back(rs);
    }
    if (r.final_mark) t.final_mark = FinalMark{r.index, *r.final_mark, r.candidates[*r.final_mark].image};
  }
  return t;
}

json to_json(const SatisfactionTrace& t) {
  json trace = json::array();
  for (const auto& r : t.rounds)
    trace.push_back(
        {{"round", r.round}, {"mean", r.mean}, {"max", r.max}, {"selected", r.selected}, {"selected_rating", r.selected_rating}});
  json fm = nullptr;
  if (t.final_mark)
    fm = {{"round", t.final_mark->round}, {"candidate", t.final_mark->candidate}, {"image", t.final_mark->image.path}};
  return {{"v", 1},
          {"session_id", t.session_id},
          {"status", to_string(t.status)},
          {"round_count", t.round_count},
          {"trace", trace},
          {"final_mark", fm}};
}

}  // namespace mentalgen::session
