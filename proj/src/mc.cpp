#include "cdois/mc.hpp"

#include "cdois/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace cdois::mc {

double Path::total_default() const {
    return std::accumulate(jump_sizes.begin(), jump_sizes.end(), 0.0);
}

PaymentGrid::PaymentGrid(const Contract& c)
    : maturity_(c.maturity()),
      rate_(c.rate()),
      steps_(c.grid_steps()),
      dt_(c.grid_step()),
      per_year_(steps_ / maturity_) {
    disc_.resize(static_cast<std::size_t>(steps_) + 1);
    cum_.resize(static_cast<std::size_t>(steps_) + 1);
    disc_[0] = 1.0;
    cum_[0] = 0.0;
    for (int k = 1; k <= steps_; ++k) {
        const auto i = static_cast<std::size_t>(k);
        disc_[i] = rate_ == 0.0 ? 1.0 : std::exp(-rate_ * dt_ * k);
        cum_[i] = cum_[i - 1] + disc_[i];
    }
}

int PaymentGrid::period_of(double t) const {
    const double pos = std::ceil(t * per_year_);
    if (!(pos >= 1.0)) return 1;
    if (pos >= steps_) return steps_;
    return static_cast<int>(pos);
}

void SimConfig::validate() const {
    if (n_paths < 1) throw DomainError("SimConfig: n_paths must be >= 1");
    if (chunk_size < 1) throw DomainError("SimConfig: chunk_size must be >= 1");
    if (threads < 0) throw DomainError("SimConfig: threads must be >= 0");
    if (!(contract.maturity() > 0.0)) throw DomainError("SimConfig: maturity must be positive");
    if (surface && (surface->time_bins < 1 || surface->loss_bins < 1)) {
        throw DomainError("SimConfig: loss surface bin counts must be >= 1");
    }
}

double LossSurface::column_mass(int t) const {
    double s = 0.0;
    for (int b = 0; b < loss_bins(); ++b) s += at(t, b);
    return s;
}

double LossSurface::column_mean(int t) const {
    double s = 0.0;
    for (int b = 0; b < loss_bins(); ++b) {
        const auto i = static_cast<std::size_t>(b);
        s += 0.5 * (loss_edges[i] + loss_edges[i + 1]) * at(t, b);
    }
    return s;
}

PathSampler::PathSampler(const MeasurePair& mp, double maturity)
    : maturity_(maturity),
      rho_alt_(mp.altered.rho()),
      lambda_alt_(mp.altered.lambda()),
      log_jump_ratio_(std::log(mp.real.rho() * mp.real.lambda()) -
                      std::log(mp.altered.rho() * mp.altered.lambda())),
      d_rho_(mp.real.rho() - mp.altered.rho()),
      d_lambda_(mp.real.lambda() - mp.altered.lambda()) {
    if (!(maturity >= 0.0) || std::isinf(maturity)) {
        throw DomainError("PathSampler: maturity must be non-negative and finite");
    }
}

void PathSampler::draw(PathStream& stream, Path& out) const {
    out.jump_times.clear();
    out.jump_sizes.clear();
    // log R gains log_jump_ratio - d_rho * (waiting time) - d_lambda * (jump
    // size) at every event and -d_rho * (remaining time) at maturity.
    double t = 0.0;
    double log_w = 0.0;
    for (;;) {
        const double wait = stream.exponential(rho_alt_);
        if (t + wait > maturity_) break;
        t += wait;
        const double size = stream.exponential(lambda_alt_);
        out.jump_times.push_back(t);
        out.jump_sizes.push_back(size);
        log_w += log_jump_ratio_ - d_rho_ * wait - d_lambda_ * size;
    }
    log_w -= d_rho_ * (maturity_ - t);
    out.log_weight = log_w;
    out.rn_weight = std::exp(log_w);
}

void generate_path(PathStream& stream, const MeasurePair& mp, double maturity, Path& out) {
    PathSampler(mp, maturity).draw(stream, out);
}

Path generate_path(PathStream& stream, const MeasurePair& mp, double maturity) {
    Path p;
    generate_path(stream, mp, maturity, p);
    return p;
}

namespace {

// Loss after each jump and the payment period it first affects.
struct PathLosses {
    std::vector<double> loss;
    std::vector<int> period;

    void build(const Path& p, const PaymentGrid& grid, LossSpec spec) {
        loss.clear();
        period.clear();
        double level = 0.0;
        for (std::size_t i = 0; i < p.jumps(); ++i) {
            level += p.jump_sizes[i];
            loss.push_back(spec == LossSpec::Exponential ? -std::expm1(-level) : std::min(level, 1.0));
            period.push_back(grid.period_of(p.jump_times[i]));
        }
    }
};

inline double clipped(double loss, double a, double d) {
    return std::min(loss, d) - std::min(loss, a);
}

LegValues value_tranche(const PathLosses& pl, const Tranche& tr, const PaymentGrid& grid) {
    const double a = tr.attach();
    const double d = tr.detach();
    const double width = tr.width();
    const std::size_t n = pl.loss.size();
    const bool undiscounted = grid.rate() == 0.0;

    double def = 0.0;
    double prem_sum = 0.0;
    double on = width;
    double prev = 0.0;
    int seg_start = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double li = pl.loss[i];
        if (li <= a) continue;
        const double cur = clipped(li, a, d);
        if (cur == prev) continue;
        const int k = pl.period[i];
        if (!undiscounted) def += grid.discount(k) * (cur - prev);
        prem_sum += on * (grid.discount_sum(k - 1) - grid.discount_sum(seg_start - 1));
        seg_start = k;
        on = width - cur;
        prev = cur;
        if (cur >= width) break;
    }
    prem_sum += on * (grid.discount_sum(grid.steps()) - grid.discount_sum(seg_start - 1));
    if (undiscounted) def = n > 0 ? clipped(pl.loss[n - 1], a, d) : 0.0;
    return {def, grid.step() * prem_sum};
}

struct ChunkResult {
    std::vector<ChunkAccumulator> def;
    std::vector<ChunkAccumulator> prem;
    WeightAccumulator weight;
    std::int64_t jumps = 0;
    std::int64_t jumps_sq = 0;
    std::vector<double> surface;
    std::exception_ptr error;
};

void add_surface(const Path& p, const PathLosses& pl, double w, const LossSurface& shape,
                 std::vector<double>& acc) {
    const int tb = shape.time_bins();
    const int lb = shape.loss_bins();
    std::size_t i = 0;
    const std::size_t n = pl.loss.size();
    for (int j = 0; j < tb; ++j) {
        const double t = shape.times[static_cast<std::size_t>(j)];
        while (i < n && p.jump_times[i] <= t) ++i;
        if (i == 0) continue;
        const double loss = pl.loss[i - 1];
        if (!(loss > 0.0)) continue;
        int b = static_cast<int>(std::ceil(loss * lb)) - 1;
        b = std::clamp(b, 0, lb - 1);
        acc[static_cast<std::size_t>(j) * static_cast<std::size_t>(lb) + static_cast<std::size_t>(b)] += w;
    }
}

LossSurface surface_shape(const SurfaceSpec& spec, double maturity) {
    LossSurface s;
    for (int j = 1; j <= spec.time_bins; ++j) s.times.push_back(maturity * j / spec.time_bins);
    for (int b = 0; b <= spec.loss_bins; ++b) {
        s.loss_edges.push_back(static_cast<double>(b) / spec.loss_bins);
    }
    s.mass.assign(static_cast<std::size_t>(spec.time_bins) * static_cast<std::size_t>(spec.loss_bins),
                  0.0);
    return s;
}

void run_chunk(const SimConfig& cfg, const PaymentGrid& grid, const LossSurface* shape,
               std::int64_t first, std::int64_t last, ChunkResult& out) {
    const std::size_t nt = cfg.tranches.size();
    // Shift by the payoff of a path without losses: Xdef = 0 and Xprem the
    // full-notional annuity on the grid.
    const double annuity = grid.step() * grid.discount_sum(grid.steps());
    out.def.assign(nt, ChunkAccumulator(0.0, 0.0));
    out.prem.clear();
    for (const auto& tr : cfg.tranches) {
        const double full = tr.width() * annuity;
        out.prem.emplace_back(full, full);
    }
    if (shape) out.surface.assign(shape->mass.size(), 0.0);
    const PathSampler sampler(cfg.measures(), cfg.contract.maturity());
    Path path;
    PathLosses pl;
    for (std::int64_t idx = first; idx < last; ++idx) {
        PathStream stream = path_stream(cfg.seed, idx);
        sampler.draw(stream, path);
        pl.build(path, grid, cfg.loss_spec);
        const double w = path.rn_weight;
        for (std::size_t t = 0; t < nt; ++t) {
            const LegValues v = value_tranche(pl, cfg.tranches[t], grid);
            out.def[t].add(w, v.def);
            out.prem[t].add(w, v.prem);
        }
        out.weight.add(w);
        const auto nj = static_cast<std::int64_t>(path.jumps());
        out.jumps += nj;
        out.jumps_sq += nj * nj;
        if (shape) add_surface(path, pl, w, *shape, out.surface);
    }
}

}  // namespace

std::vector<LegValues> value_path(const Path& p, const std::vector<Tranche>& tranches,
                                  const PaymentGrid& grid, LossSpec spec) {
    PathLosses pl;
    pl.build(p, grid, spec);
    std::vector<LegValues> out;
    out.reserve(tranches.size());
    for (const auto& tr : tranches) out.push_back(value_tranche(pl, tr, grid));
    return out;
}

SimResult run_simulation(const SimConfig& cfg) {
    cfg.validate();
    const PaymentGrid grid(cfg.contract);
    std::optional<LossSurface> shape;
    if (cfg.surface) shape = surface_shape(*cfg.surface, cfg.contract.maturity());

    const std::int64_t n_chunks = (cfg.n_paths + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<ChunkResult> chunks(static_cast<std::size_t>(n_chunks));

    int workers = cfg.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : cfg.threads;
    workers = static_cast<int>(std::clamp<std::int64_t>(workers, 1, n_chunks));

    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            auto& res = chunks[static_cast<std::size_t>(c)];
            try {
                const std::int64_t first = c * cfg.chunk_size;
                const std::int64_t last = std::min(cfg.n_paths, first + cfg.chunk_size);
                run_chunk(cfg, grid, shape ? &*shape : nullptr, first, last, res);
            } catch (...) {
                res.error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    SimResult result;
    result.n_paths = cfg.n_paths;
    result.seed = cfg.seed;
    const std::size_t nt = cfg.tranches.size();
    result.tranches.reserve(nt);
    for (const auto& tr : cfg.tranches) result.tranches.push_back({tr, {}, {}});
    std::int64_t jumps = 0;
    std::int64_t jumps_sq = 0;
    for (const auto& ch : chunks) {
        if (ch.error) std::rethrow_exception(ch.error);
        for (std::size_t t = 0; t < nt; ++t) {
            result.tranches[t].def.merge(ch.def[t].finish());
            result.tranches[t].prem.merge(ch.prem[t].finish());
        }
        result.weight.merge(ch.weight.finish());
        jumps += ch.jumps;
        jumps_sq += ch.jumps_sq;
        if (shape) {
            for (std::size_t i = 0; i < shape->mass.size(); ++i) shape->mass[i] += ch.surface[i];
        }
    }
    const double n = static_cast<double>(cfg.n_paths);
    const double mean_jumps = static_cast<double>(jumps) / n;
    result.jump_count.n = cfg.n_paths;
    result.jump_count.mean = mean_jumps;
    result.jump_count.m2 = std::max(0.0, static_cast<double>(jumps_sq) - n * mean_jumps * mean_jumps);
    if (shape) {
        for (auto& m : shape->mass) m /= n;
        result.surface = std::move(shape);
    }
    return result;
}

LossSurface loss_surface(const SimConfig& cfg, const SurfaceSpec& bins) {
    SimConfig c = cfg;
    c.surface = bins;
    c.tranches.clear();
    return *run_simulation(c).surface;
}

}  // namespace cdois::mc
