/*
 * Copyright 2026 The qtone Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QTONE_PARALLEL_HPP
#define QTONE_PARALLEL_HPP

#include <algorithm>
#include <thread>
#include <vector>

namespace qtone {

inline int default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

/// Runs fn(row_begin, row_end) over contiguous row chunks. Results must not
/// depend on the chunking: each row's output has to be computed from that
/// row alone (plus read-only shared state).
template <typename Fn>
void parallel_rows(int rows, int workers, Fn&& fn) {
    workers = std::clamp(workers, 1, std::max(1, rows));
    if (workers == 1 || rows <= 1) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int chunk = (rows + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int r0 = w * chunk;
        int r1 = std::min(rows, r0 + chunk);
        if (r0 >= r1) break;
        pool.emplace_back([&fn, r0, r1] { fn(r0, r1); });
    }
    for (auto& t : pool) t.join();
}

/// Deterministic parallel reduction: per_row(r) values are computed
/// concurrently but always accumulated in row order, so the result is
/// independent of the worker count.
template <typename Fn>
double sum_rows_ordered(int rows, int workers, Fn&& per_row) {
    std::vector<double> partial(static_cast<std::size_t>(std::max(rows, 0)), 0.0);
    parallel_rows(rows, workers, [&](int r0, int r1) {
        for (int r = r0; r < r1; ++r) partial[r] = per_row(r);
    });
    double sum = 0.0;
    for (double v : partial) sum += v;
    return sum;
}

/// Same scheme for max: order-independent mathematically, kept row-ordered
/// for symmetry with the sums.
template <typename Fn>
double max_rows_ordered(int rows, int workers, Fn&& per_row, double init) {
    std::vector<double> partial(static_cast<std::size_t>(std::max(rows, 0)), init);
    parallel_rows(rows, workers, [&](int r0, int r1) {
        for (int r = r0; r < r1; ++r) partial[r] = per_row(r);
    });
    double best = init;
    for (double v : partial) best = std::max(best, v);
    return best;
}

}  // namespace qtone

#endif  // QTONE_PARALLEL_HPP
