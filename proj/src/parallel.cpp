// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "hd/parallel.hpp"

#include <omp.h>

#include <atomic>

namespace hd {

namespace {
std::atomic<int> g_workers{0};
}

void set_worker_count(int workers) { g_workers = workers < 0 ? 0 : workers; }

int worker_count()
{
    const int w = g_workers.load();
    return w > 0 ? w : omp_get_max_threads();
}

} // namespace hd
