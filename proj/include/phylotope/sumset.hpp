#pragma once

// Distinct n-fold sums of a fixed set of small non-negative integer vectors.
//
// Sums are packed one byte per coordinate. Workers take leading-vertex strata
// (multisets with non-decreasing indices whose first index is i0), buffer the
// packed sums, and turn full buffers into sorted duplicate-free runs. Runs that
// do not fit the memory cap are spilled to disk. A k-way merge over all runs
// visits every distinct sum exactly once, in lexicographic byte order, so the
// visited sequence is independent of the worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <gmpxx.h>

#include "phylotope/errors.hpp"
#include "phylotope/model.hpp"

namespace phylotope {

struct SumsetOptions {
    /// Maximum number of multisets C(V+n-1, n) to enumerate.
    std::uint64_t multiset_cap = std::uint64_t{1} << 32;
    /// In-memory budget for buffered sums and runs; beyond it runs go to disk.
    std::uint64_t memory_cap_bytes = std::uint64_t{8} << 30;
    unsigned threads = 1;
    /// Empty means std::filesystem::temp_directory_path().
    std::filesystem::path spill_directory;
};

/// Row-major byte matrix: count rows of width bytes.
class PackedVectors {
public:
    PackedVectors(std::size_t width) : width_(width) {}

    static PackedVectors from(std::span<const ExponentVector> vs) {
        if (vs.empty())
            throw StructuralError("empty vertex set");
        PackedVectors p(vs.front().coords.size());
        for (const auto& v : vs)
            p.push(v.coords);
        return p;
    }

    void push(std::span<const std::uint8_t> row) {
        if (row.size() != width_)
            throw StructuralError("vector width mismatch");
        data_.insert(data_.end(), row.begin(), row.end());
    }

    std::size_t width() const { return width_; }
    std::size_t size() const { return width_ ? data_.size() / width_ : 0; }
    const std::uint8_t* row(std::size_t i) const { return data_.data() + i * width_; }

private:
    std::size_t width_;
    std::vector<std::uint8_t> data_;
};

/// C(V+n-1, n) exactly.
inline mpz_class multiset_count(std::size_t vertices, unsigned n) {
    if (vertices == 0)
        return n == 0 ? 1 : 0;
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), vertices + n - 1, n);
    return out;
}

namespace detail {

class SpillFile {
public:
    explicit SpillFile(std::filesystem::path p) : path_(std::move(p)) {}
    SpillFile(const SpillFile&) = delete;
    SpillFile& operator=(const SpillFile&) = delete;
    ~SpillFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

struct Run {
    std::vector<std::uint8_t> memory;
    std::unique_ptr<SpillFile> file;
    std::size_t records = 0;
};

/// Sorts width-byte records and drops duplicates, in place.
inline void sort_unique(std::vector<std::uint8_t>& buf, std::size_t width) {
    const std::size_t n = buf.size() / width;
    if (n == 0)
        return;
    std::vector<std::uint32_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = static_cast<std::uint32_t>(i);
    const std::uint8_t* base = buf.data();
    std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::memcmp(base + std::size_t{a} * width, base + std::size_t{b} * width, width) < 0;
    });
    std::vector<std::uint8_t> out;
    out.reserve(buf.size());
    const std::uint8_t* last = nullptr;
    for (auto i : perm) {
        const std::uint8_t* rec = base + std::size_t{i} * width;
        if (last && std::memcmp(last, rec, width) == 0)
            continue;
        out.insert(out.end(), rec, rec + width);
        last = rec;
    }
    buf.swap(out);
}

class RunCursor {
public:
    RunCursor(const Run& run, std::size_t width) : run_(run), width_(width) {
        if (run.file) {
            in_.open(run.file->path(), std::ios::binary);
            if (!in_)
                throw Error("cannot reopen spill file " + run.file->path().string());
            chunk_.resize(width * 4096);
        }
        advance();
    }

    bool done() const { return done_; }
    const std::uint8_t* current() const { return current_; }

    void advance() {
        if (consumed_ == run_.records) {
            done_ = true;
            return;
        }
        if (!run_.file) {
            current_ = run_.memory.data() + consumed_ * width_;
        } else {
            if (chunk_pos_ == chunk_len_) {
                std::size_t want = std::min<std::size_t>(4096, run_.records - consumed_);
                in_.read(reinterpret_cast<char*>(chunk_.data()),
                         static_cast<std::streamsize>(want * width_));
                if (static_cast<std::size_t>(in_.gcount()) != want * width_)
                    throw Error("short read from spill file " + run_.file->path().string());
                chunk_len_ = want;
                chunk_pos_ = 0;
            }
            current_ = chunk_.data() + chunk_pos_ * width_;
            ++chunk_pos_;
        }
        ++consumed_;
    }

private:
    const Run& run_;
    std::size_t width_;
    std::ifstream in_;
    std::vector<std::uint8_t> chunk_;
    std::size_t chunk_pos_ = 0, chunk_len_ = 0;
    std::size_t consumed_ = 0;
    const std::uint8_t* current_ = nullptr;
    bool done_ = false;
};

inline std::filesystem::path spill_path(const SumsetOptions& opt) {
    static std::atomic<std::uint64_t> counter{0};
    static const auto salt = std::random_device{}();
    auto dir = opt.spill_directory.empty() ? std::filesystem::temp_directory_path()
                                           : opt.spill_directory;
    auto tag = std::to_string(salt) + "-" + std::to_string(counter.fetch_add(1));
    return dir / ("phylotope-run-" + tag + ".bin");
}

} // namespace detail

using SumVisitor = std::function<void(std::span<const std::uint8_t>)>;

/// Visits every distinct sum v_{i1} + ... + v_{in} (i1 <= ... <= in) once,
/// in lexicographic order. n = 0 visits the zero vector.
inline void for_each_distinct_sum(const PackedVectors& verts, unsigned n,
                                  const SumsetOptions& opt, const SumVisitor& visit) {
    const std::size_t width = verts.width();
    const std::size_t nv = verts.size();
    if (n > 255)
        throw BudgetExceeded("dilation " + std::to_string(n) + " exceeds the packed range (255)");
    if (n == 0) {
        std::vector<std::uint8_t> zero(width, 0);
        visit(zero);
        return;
    }
    if (nv == 0)
        return;
    const auto multisets = multiset_count(nv, n);
    if (multisets > mpz_class(std::to_string(opt.multiset_cap)))
        throw BudgetExceeded("enumerating " + multisets.get_str() + " multisets of " +
                             std::to_string(nv) + " vertices at n=" + std::to_string(n) +
                             " exceeds the cap of " + std::to_string(opt.multiset_cap) +
                             "; use a decomposition plan");
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t c = 0; c < width; ++c)
            if (static_cast<unsigned>(verts.row(i)[c]) * n > 255)
                throw BudgetExceeded("packed sum entry would exceed 255");

    const unsigned threads = std::max(1u, opt.threads);
    const std::uint64_t mem = std::max<std::uint64_t>(opt.memory_cap_bytes, width * 2);
    const std::size_t buffer_records = static_cast<std::size_t>(std::max<std::uint64_t>(
        1, std::min<std::uint64_t>(mem / (2 * threads) / std::max<std::size_t>(width, 1),
                                   std::uint64_t{1} << 31)));

    std::mutex runs_mutex;
    std::vector<detail::Run> runs;
    std::uint64_t resident_bytes = 0;
    std::atomic<std::size_t> next_stratum{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto emit_run = [&](std::vector<std::uint8_t>& buf) {
        detail::sort_unique(buf, width);
        detail::Run run;
        run.records = buf.size() / width;
        if (run.records == 0)
            return;
        std::lock_guard lock(runs_mutex);
        if (resident_bytes + buf.size() > mem / 2) {
            auto path = detail::spill_path(opt);
            std::ofstream out(path, std::ios::binary);
            out.write(reinterpret_cast<const char*>(buf.data()),
                      static_cast<std::streamsize>(buf.size()));
            if (!out)
                throw Error("cannot write spill file " + path.string());
            run.file = std::make_unique<detail::SpillFile>(path);
            buf.clear();
        } else {
            resident_bytes += buf.size();
            run.memory = std::move(buf);
            buf = {};
        }
        runs.push_back(std::move(run));
    };

    auto worker = [&] {
        try {
            std::vector<std::uint8_t> buf;
            buf.reserve(std::min<std::size_t>(buffer_records, 1 << 20) * width);
            std::vector<std::uint8_t> partial(std::size_t{n} * width);
            std::vector<std::size_t> idx(n);
            while (true) {
                const std::size_t i0 = next_stratum.fetch_add(1);
                if (i0 >= nv)
                    break;
                std::memcpy(partial.data(), verts.row(i0), width);
                // depth-first over non-decreasing index tails
                std::size_t level = 1;
                if (n == 1) {
                    buf.insert(buf.end(), partial.begin(), partial.begin() + static_cast<std::ptrdiff_t>(width));
                    if (buf.size() / width >= buffer_records)
                        emit_run(buf);
                    continue;
                }
                idx[0] = i0;
                idx[1] = i0;
                while (true) {
                    const std::uint8_t* prev = partial.data() + (level - 1) * width;
                    std::uint8_t* cur = partial.data() + level * width;
                    const std::uint8_t* v = verts.row(idx[level]);
                    for (std::size_t c = 0; c < width; ++c)
                        cur[c] = static_cast<std::uint8_t>(prev[c] + v[c]);
                    if (level + 1 == n) {
                        buf.insert(buf.end(), cur, cur + width);
                        if (buf.size() / width >= buffer_records)
                            emit_run(buf);
                        // next sibling, backtracking as needed
                        while (level >= 1 && ++idx[level] == nv)
                            --level;
                        if (level == 0)
                            break;
                        for (std::size_t k = level + 1; k < n; ++k)
                            idx[k] = idx[level];
                        // recompute from the changed level on the next pass
                    } else {
                        ++level;
                        idx[level] = idx[level - 1];
                    }
                }
            }
            emit_run(buf);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    if (runs.size() == 1 && !runs.front().file) {
        const auto& r = runs.front();
        for (std::size_t i = 0; i < r.records; ++i)
            visit(std::span<const std::uint8_t>(r.memory.data() + i * width, width));
        return;
    }

    std::vector<std::unique_ptr<detail::RunCursor>> cursors;
    for (const auto& r : runs)
        cursors.push_back(std::make_unique<detail::RunCursor>(r, width));
    auto greater = [&](std::size_t a, std::size_t b) {
        return std::memcmp(cursors[a]->current(), cursors[b]->current(), width) > 0;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(greater)> heap(greater);
    for (std::size_t i = 0; i < cursors.size(); ++i)
        if (!cursors[i]->done())
            heap.push(i);
    std::vector<std::uint8_t> last(width);
    bool have_last = false;
    while (!heap.empty()) {
        auto i = heap.top();
        heap.pop();
        const std::uint8_t* rec = cursors[i]->current();
        if (!have_last || std::memcmp(rec, last.data(), width) != 0) {
            std::memcpy(last.data(), rec, width);
            have_last = true;
            visit(std::span<const std::uint8_t>(last.data(), width));
        }
        cursors[i]->advance();
        if (!cursors[i]->done())
            heap.push(i);
    }
}

inline std::uint64_t count_distinct_sums(const PackedVectors& verts, unsigned n,
                                         const SumsetOptions& opt = {}) {
    std::uint64_t count = 0;
    for_each_distinct_sum(verts, n, opt, [&](std::span<const std::uint8_t>) { ++count; });
    return count;
}

} // namespace phylotope
