#include "cst/contagion.hpp"

#include <algorithm>
#include <cmath>

namespace cst {

Propagator::Propagator(const SupplyNetwork& net, const ProductionParams& params, ContagionOptions opts)
    : net_(net), params_(params), opts_(opts), h_(net.size(), 1.0), pinned_(net.size(), 0),
      inert_(net.size(), 0), stamp_(net.size(), 0) {
    if (params.size() != net.size())
        throw InputError("production parameters were calibrated on a different network");
    if (!(opts_.epsilon > 0.0))
        throw ConfigError("contagion epsilon must be positive");
    for (FirmId i = 0; i < net.size(); ++i) {
        inert_[i] = params.firm(i).inert;
        if (!inert_[i])
            active_.push_back(i);
    }
    const std::size_t threads = resolve_threads(opts_.threads);
    if (threads > 1)
        pool_ = std::make_unique<WorkerPool>(threads);
}

Propagator::~Propagator() = default;

void Propagator::enqueue_neighbours(FirmId i, std::vector<FirmId>& next) {
    auto push = [&](FirmId j) {
        if (stamp_[j] == epoch_ || pinned_[j] || inert_[j])
            return;
        stamp_[j] = epoch_;
        next.push_back(j);
    };
    push(i);
    for (FirmId j : net_.suppliers(i))
        push(j);
    for (FirmId j : net_.customers(i))
        push(j);
}

double Propagator::evaluate(FirmId i) const {
    // h only decreases, so a firm at 0 stays there.
    if (pinned_[i] || h_[i] == 0.0)
        return h_[i];
    double v = std::min(h_[i], params_.supply_level(i, h_));
    if (opts_.demand_channel) {
        const auto buyers = net_.customers(i);
        const auto sales = net_.sales_to(i);
        double demand = 0.0;
        for (std::size_t e = 0; e < buyers.size(); ++e)
            demand += sales[e] * h_[buyers[e]];
        v = std::min(v, demand / net_.out_strength(i));
    }
    return v;
}

template <class OnChange>
std::size_t Propagator::iterate(std::vector<FirmId>& frontier, std::vector<double>* trace, OnChange&& on_change) {
    std::vector<FirmId> changed;
    std::size_t iterations = 0;
    bool dense = false;
    while (true) {
        // Jacobi step: evaluate against the previous state, then apply.
        const std::vector<FirmId>& eval = dense ? active_ : frontier;
        scratch_.resize(eval.size());
        auto evaluate_range = [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k)
                scratch_[k] = evaluate(eval[k]);
        };
        if (pool_ && eval.size() >= parallel_threshold) {
            const std::size_t parts = pool_->size();
            pool_->run([&](std::size_t part) {
                evaluate_range(eval.size() * part / parts, eval.size() * (part + 1) / parts);
            });
        } else {
            evaluate_range(0, eval.size());
        }
        double max_delta = 0.0;
        changed.clear();
        for (std::size_t k = 0; k < eval.size(); ++k) {
            const FirmId i = eval[k];
            const double v = scratch_[k];
            if (v != h_[i]) {
                max_delta = std::max(max_delta, h_[i] - v);
                h_[i] = v;
                changed.push_back(i);
                on_change(i);
            }
        }
        ++iterations;
        if (trace)
            trace->push_back(max_delta);
        if (max_delta < opts_.epsilon)
            return iterations;
        if (iterations >= opts_.max_iterations)
            throw ConvergenceError("contagion did not converge within " + std::to_string(opts_.max_iterations) +
                                       " iterations (last max change " + format_double(max_delta) + ")",
                                   max_delta);
        // Re-evaluating a firm whose neighbours did not move is a no-op, so
        // a full sweep is cheaper than tracking a frontier once most firms move.
        dense = changed.size() * 8 > active_.size();
        if (dense)
            continue;
        if (++epoch_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 1;
        }
        frontier.clear();
        for (FirmId i : changed)
            enqueue_neighbours(i, frontier);
    }
}

double Propagator::weighted_loss(std::span<const double> h) const {
    const double total = net_.total_value();
    if (!(total > 0.0))
        return 0.0;
    double lost = 0.0;
    for (FirmId i = 0; i < net_.size(); ++i)
        lost += net_.out_strength(i) * (1.0 - h[i]);
    return lost / total;
}

ContagionResult Propagator::run(std::span<const double> h_init) {
    const std::size_t n = net_.size();
    if (h_init.size() != n)
        throw InputError("propagate: initial production vector has wrong size");
    for (FirmId i = 0; i < n; ++i)
        if (!std::isfinite(h_init[i]) || h_init[i] < 0.0 || h_init[i] > 1.0)
            throw InputError("propagate: initial production level of firm " + std::to_string(i) +
                             " is not in [0, 1]");

    ContagionResult res;
    std::copy(h_init.begin(), h_init.end(), h_.begin());
    for (FirmId i = 0; i < n; ++i)
        pinned_[i] = h_init[i] == 0.0;
    res.direct_loss = weighted_loss(h_init);

    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    std::vector<FirmId> frontier;
    for (FirmId i = 0; i < n; ++i)
        if (h_init[i] != 1.0)
            enqueue_neighbours(i, frontier);
    res.iterations = iterate(frontier, opts_.trace ? &res.trace : nullptr, [](FirmId) {});

    res.h.assign(h_.begin(), h_.end());
    res.total_loss = weighted_loss(res.h);
    res.indirect_loss = res.total_loss - res.direct_loss;

    std::fill(h_.begin(), h_.end(), 1.0);
    std::fill(pinned_.begin(), pinned_.end(), 0);
    return res;
}

double Propagator::loss_for_failures(std::span<const FirmId> failed) {
    std::vector<FirmId> touched(failed.begin(), failed.end());
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    for (FirmId f : failed) {
        h_.at(f) = 0.0;
        pinned_[f] = 1;
    }
    std::vector<FirmId> frontier;
    for (FirmId f : failed)
        enqueue_neighbours(f, frontier);
    iterate(frontier, nullptr, [&](FirmId i) { touched.push_back(i); });

    // Untouched firms contribute exact zeros, so summing the touched ones in
    // index order reproduces the full-vector loss bit for bit.
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    double loss = 0.0;
    const double total = net_.total_value();
    if (total > 0.0) {
        double lost = 0.0;
        for (FirmId i : touched)
            lost += net_.out_strength(i) * (1.0 - h_[i]);
        loss = lost / total;
    }
    for (FirmId i : touched) {
        h_[i] = 1.0;
        pinned_[i] = 0;
    }
    return loss;
}

ContagionResult propagate(const SupplyNetwork& net, const ProductionParams& params, std::span<const double> h_init,
                          const ContagionOptions& opts) {
    Propagator p(net, params, opts);
    return p.run(h_init);
}

namespace {

std::vector<FirmId> resolve_firms(std::size_t n, std::span<const FirmId> firms) {
    std::vector<FirmId> ids;
    if (firms.empty()) {
        ids.resize(n);
        for (FirmId i = 0; i < n; ++i)
            ids[i] = i;
    } else {
        ids.assign(firms.begin(), firms.end());
        for (FirmId i : ids)
            if (i >= n)
                throw InputError("unknown firm id " + std::to_string(i));
    }
    return ids;
}

} // namespace

std::vector<double> esri(const SupplyNetwork& net, const ProductionParams& params, const ContagionOptions& opts,
                         std::span<const FirmId> firms) {
    const auto ids = resolve_firms(net.size(), firms);
    Propagator p(net, params, opts);
    std::vector<double> out;
    out.reserve(ids.size());
    for (FirmId i : ids) {
        const FirmId failed[] = {i};
        out.push_back(p.loss_for_failures(failed));
    }
    return out;
}

std::vector<double> fsri(const SupplyNetwork& net, const ProductionParams& params, const FirmBook& book,
                         const BankRegister& banks, const ContagionOptions& opts, std::span<const FirmId> firms) {
    const auto ids = resolve_firms(net.size(), firms);
    Propagator p(net, params, opts);
    const std::vector<double> no_costs(net.size(), 0.0);
    std::vector<double> h_init(net.size(), 1.0);
    std::vector<double> out;
    out.reserve(ids.size());
    for (FirmId i : ids) {
        h_init[i] = 0.0;
        const auto res = p.run(h_init);
        h_init[i] = 1.0;
        DefaultIndicator direct(net.size(), 0);
        direct[i] = book[i].default_eligible();
        const auto proj = project_books(book, res.h, no_costs);
        const auto indirect = indirect_defaults(proj, direct);
        out.push_back(bank_losses(banks, direct, indirect).system_total);
    }
    return out;
}

} // namespace cst
