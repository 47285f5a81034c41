// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace hd {

// Worker count used by every pixel-parallel loop. 0 means "OpenMP default".
void set_worker_count(int workers);
int worker_count();

// Runs body(y) for y in [0, rows). Each row must only write its own outputs;
// results are then independent of scheduling and worker count.
template <class Body>
void parallel_rows(int rows, Body&& body)
{
    const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers) if (workers != 1)
    for (int y = 0; y < rows; ++y)
        body(y);
}

} // namespace hd
