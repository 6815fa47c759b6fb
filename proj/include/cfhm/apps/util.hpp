#ifndef CFHM_APPS_UTIL_HPP
#define CFHM_APPS_UTIL_HPP

#include <functional>
#include <vector>

namespace cfhm::apps {

inline std::vector<std::vector<int>> all_subsets_of_size(int m, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == size) { out.push_back(cur); return; }
        for (int v = start; v < m; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace cfhm::apps

#endif  // CFHM_APPS_UTIL_HPP
