#include <atomic>
#include <chrono>
#include <functional>
#include <thread>

#include "divext/probes.hpp"
#include "divext/report.hpp"

namespace divext::cli {

namespace {

using probes::QuotientGroup;

struct Task {
    std::string probe;
    Json params;
    std::function<void(ItemResult&)> body;
};

std::vector<ItemResult> run_tasks(std::vector<Task> tasks, const RunConfig& cfg) {
    std::vector<ItemResult> results(tasks.size());
    unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size() ? tasks.size() : 1));
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= tasks.size()) break;
            ItemResult& res = results[idx];
            res.probe = tasks[idx].probe;
            res.params = tasks[idx].params;
            res.status = "pass";
            auto start = std::chrono::steady_clock::now();
            try {
                tasks[idx].body(res);
            } catch (const std::exception& ex) {
                res.status = "fail";
                res.counts["exception"] = ex.what();
            }
            res.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

Json field_params(int p, int f, int d, int r) {
    Json j;
    j["p"] = p;
    j["f"] = f;
    j["d"] = d;
    j["r"] = r;
    return j;
}

// ---- suite bodies ----------------------------------------------------------

void curves_body(int p, int f, int d, int r, uint64_t cap, ItemResult& res) {
    auto k = gf::make_field(p, f, d, r, cap);
    uint64_t expect = 1;
    for (int i = 0; i < d; ++i) expect *= k->q;
    expect -= k->q;  // q^d - q
    uint64_t checked = 0;
    for (uint32_t a = 1; a < k->size; ++a) {
        auto cc = probes::curve_count(gf::FqElem{k.get(), a});
        bool ok = cc.points == expect && cc.ratios * cc.mu == cc.points;
        if (!ok) {
            res.status = "fail";
            Json ce;
            ce["alpha"] = a;
            ce["points"] = cc.points;
            ce["ratios"] = cc.ratios;
            ce["mu"] = cc.mu;
            res.counterexample = ce;
            return;
        }
        ++checked;
    }
    res.counts["alphas_checked"] = checked;
    res.counts["points_per_alpha"] = expect;
    res.counts["mu"] = probes::curve_count(gf::FqElem{k.get(), 1}).mu;
}

void fermat_body(int p, int f, int d, int r, uint64_t cap, ItemResult& res) {
    auto k = gf::make_field(p, f, d, r, cap);
    auto fc = probes::fermat_coset_count(k);
    uint64_t total = 0;
    for (uint32_t a = 1; a < k->size; ++a) total += probes::curve_count(gf::FqElem{k.get(), a}).points;
    uint64_t qd = 1;
    for (int i = 0; i < d; ++i) qd *= k->q;
    bool avg_ok = total == (qd - k->q) * (k->size - 1);
    res.counts["coset_count"] = fc.brute;
    res.counts["formula"] = fc.formula;
    res.counts["sum_over_nonzero_alpha"] = total;
    if (fc.brute != static_cast<uint64_t>(fc.formula) || !avg_ok) res.status = "fail";
}

void frattini_body(int p, int d, int N, uint64_t cap, ItemResult& res) {
    auto k = gf::make_field(p, 1, d, 1, gf::kDefaultFieldCap);
    auto A = dalg::make_algebra(k, dalg::Mode::EqualChar, N);
    auto Q = probes::make_quotient(A, cap);
    auto closure = probes::frattini_closure(Q);
    auto predicted = probes::frattini_predicted(Q);
    res.counts["closure_size"] = closure.size();
    res.counts["predicted_size"] = predicted.size();
    res.counts["group_order"] = Q.order();
    if (closure != predicted) res.status = "fail";
}

void layers_body(int p, int f, int d, int r, ItemResult& res) {
    auto k = gf::make_field(p, f, d, r);
    auto A = dalg::make_algebra(k, dalg::Mode::EqualChar, 2 * d + 2);
    auto Q = probes::make_quotient(A);
    Json dims = Json::array();
    for (int i = 1; i <= 2 * d; ++i) {
        auto lr = probes::layer_image(i, Q);
        Json e;
        e["i"] = i;
        e["dim"] = lr.computed.dim();
        e["kernel_case"] = lr.predicted_is_kernel;
        dims.push_back(e);
        if (!lr.match) {
            res.status = "fail";
            res.counterexample = e;
            return;
        }
    }
    res.counts["layers"] = dims;
}

void pth_power_body(int p, int d, int M, uint64_t seed, int trials, ItemResult& res) {
    auto k = gf::make_field(p, 1, d, 1);
    auto A = dalg::make_algebra(k, dalg::Mode::MixedCharUnramified, d * M);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        auto z = probes::random_i1(A, rng);
        auto w = dalg::pow(z, p);
        bool in_layer = dalg::valuation(dalg::sub(w, dalg::one(A))) >= d + 1;
        auto root = probes::pth_root(dalg::sub(w, dalg::one(A)));
        bool roundtrip = dalg::pow(root, p) == w;
        if (in_layer && roundtrip) ++ok;
        else {
            res.status = "fail";
            res.counterexample = Json::parse(dalg::to_json(z));
        }
    }
    res.counts["trials"] = trials;
    res.counts["ok"] = ok;
}

void norm_body(int p, int f, int d, int r, dalg::Mode mode, int N, uint64_t seed, int trials,
               ItemResult& res) {
    auto k = gf::make_field(p, f, d, r);
    auto A = dalg::make_algebra(k, mode, N);
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        auto x = probes::random_i1(A, rng);
        auto [u, v] = probes::nrd1_decompose(x);  // throws on recomposition failure
        bool central_ok = dalg::mul(u, v) == dalg::mul(v, u);
        bool norm_ok = A->g_is_zero(A->g_sub(dalg::reduced_norm(v), A->g_one()));
        if (central_ok && norm_ok) ++ok;
        else res.status = "fail";
    }
    res.counts["trials"] = trials;
    res.counts["ok"] = ok;
}

void commutator_body(int p, int d, int N, uint64_t cap, ItemResult& res) {
    auto k = gf::make_field(p, 1, d, 1);
    auto A = dalg::make_algebra(k, dalg::Mode::EqualChar, N);
    auto Q = probes::make_quotient(A, cap);
    uint64_t targets = 0, solved = 0;
    int64_t backtracks[4] = {0, 0, 0, 0};
    for (uint64_t idx = 0; idx < Q.layer_order(2); ++idx) {
        auto t = Q.element_from(2, idx);
        if (dalg::valuation(dalg::sub(t, dalg::one(A))) != 2) continue;
        if (!probes::frattini_predicted_member(Q, t)) continue;
        ++targets;
        auto wit = probes::comm_solve(t, Q);
        if (wit) {
            ++solved;
            backtracks[wit->backtrack_level] += 1;
        } else if (!res.counterexample) {
            res.counterexample = Json::parse(dalg::to_json(t));
        }
    }
    res.counts["targets"] = targets;
    res.counts["solved"] = solved;
    res.counts["backtrack_histogram"] = {backtracks[0], backtracks[1], backtracks[2], backtracks[3]};
    if (solved != targets) res.status = "fail";
}

void oracle_body(int p, int f, int d, int r, ItemResult& res) {
    auto k = gf::make_field(p, f, d, r);
    cohomx::LocalField lf{cohomx::FieldCase::FunctionField, 1, f};
    std::vector<chars::RootOfUnity> alphas = {chars::RootOfUnity::trivial()};
    for (int64_t den : {2, 3, 7}) {
        if (gcd_i64(den, p) != 1) continue;
        if (k->order % den != 0) continue;
        alphas.push_back(chars::RootOfUnity::make(1, den));
    }
    uint64_t total = 0, agree = 0;
    for (int a = 1; a <= d; ++a) {
        if (d % a) continue;
        uint64_t div = k->order / (ipow_u64(k->q, static_cast<uint64_t>(a)) - 1);
        for (uint64_t M = 0; M < k->order; M += div) {
            for (const auto& alpha : alphas) {
                auto c = chars::make_character(k, a, alpha, M);
                for (bool dualized : {false, true}) {
                    ++total;
                    auto sym = cohomx::mult_trivial_h1(lf, c, dualized);
                    int orc = cohomx::invariants_oracle(a, c, dualized);
                    if (sym.finite == orc) ++agree;
                    else if (!res.counterexample) {
                        Json ce;
                        ce["character"] = Json::parse(chars::character_to_json(c));
                        ce["dualized"] = dualized;
                        ce["symbolic"] = sym.finite;
                        ce["oracle"] = orc;
                        res.counterexample = ce;
                    }
                }
            }
        }
    }
    res.counts["characters_checked"] = total;
    res.counts["agreements"] = agree;
    if (agree != total) res.status = "fail";
}

void add_suite(std::vector<Task>& tasks, const std::string& suite, const RunConfig& cfg) {
    if (suite == "curves") {
        for (auto [p, f, d, r] : {std::tuple{2, 1, 3, 1}, {2, 2, 3, 1}}) {
            Task t{"curves", field_params(p, f, d, r),
                   [=, cap = cfg.cap_dlog](ItemResult& res) { curves_body(p, f, d, r, cap, res); }};
            tasks.push_back(std::move(t));
        }
    } else if (suite == "fermat") {
        for (auto [p, f, d, r] : {std::tuple{3, 1, 2, 1}, {5, 1, 2, 1}, {3, 1, 4, 1}}) {
            Task t{"fermat", field_params(p, f, d, r),
                   [=, cap = cfg.cap_dlog](ItemResult& res) { fermat_body(p, f, d, r, cap, res); }};
            tasks.push_back(std::move(t));
        }
    } else if (suite == "frattini") {
        for (auto [p, d, N] : {std::tuple{3, 2, 4}, {2, 3, 4}, {5, 2, 4}}) {
            Json params = field_params(p, 1, d, 1);
            params["N"] = N;
            Task t{"frattini", params,
                   [=, cap = cfg.cap_enum](ItemResult& res) { frattini_body(p, d, N, cap, res); }};
            tasks.push_back(std::move(t));
        }
    } else if (suite == "layers") {
        for (auto [p, f, d, r] : {std::tuple{3, 1, 2, 1}, {2, 1, 3, 1}}) {
            Task t{"layers", field_params(p, f, d, r),
                   [=](ItemResult& res) { layers_body(p, f, d, r, res); }};
            tasks.push_back(std::move(t));
        }
    } else if (suite == "pth-power") {
        Json params = field_params(5, 1, 2, 1);
        params["M"] = 4;
        Task t{"pth-power", params,
               [seed = cfg.seed](ItemResult& res) { pth_power_body(5, 2, 4, seed, 1000, res); }};
        tasks.push_back(std::move(t));
    } else if (suite == "norm") {
        {
            Json params = field_params(2, 1, 3, 1);
            params["mode"] = "equal-char";
            params["N"] = 6;
            Task t{"norm", params, [seed = cfg.seed](ItemResult& res) {
                       norm_body(2, 1, 3, 1, dalg::Mode::EqualChar, 6, seed, 200, res);
                   }};
            tasks.push_back(std::move(t));
        }
        {
            Json params = field_params(5, 1, 2, 1);
            params["mode"] = "mixed-char";
            params["N"] = 6;
            Task t{"norm", params, [seed = cfg.seed](ItemResult& res) {
                       norm_body(5, 1, 2, 1, dalg::Mode::MixedCharUnramified, 6, seed, 200, res);
                   }};
            tasks.push_back(std::move(t));
        }
    } else if (suite == "commutator") {
        for (auto [p, d, N] : {std::tuple{2, 5, 4}, {2, 3, 4}}) {
            Json params = field_params(p, 1, d, 1);
            params["N"] = N;
            Task t{"commutator", params,
                   [=, cap = cfg.cap_enum](ItemResult& res) { commutator_body(p, d, N, cap, res); }};
            tasks.push_back(std::move(t));
        }
    } else if (suite == "oracle") {
        for (auto [p, f, d, r] :
             {std::tuple{3, 1, 2, 1}, {2, 1, 3, 1}, {5, 1, 2, 1}, {2, 2, 3, 1}}) {
            Task t{"oracle", field_params(p, f, d, r),
                   [=](ItemResult& res) { oracle_body(p, f, d, r, res); }};
            tasks.push_back(std::move(t));
        }
    } else {
        require(false, "unknown verification suite: " + suite);
    }
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"curves", "fermat", "frattini", "layers", "pth-power", "norm", "commutator", "oracle"};
}

std::vector<ItemResult> run_suite(const std::string& suite, const RunConfig& cfg) {
    std::vector<Task> tasks;
    if (suite == "all") {
        for (const auto& name : suite_names()) add_suite(tasks, name, cfg);
    } else {
        add_suite(tasks, suite, cfg);
    }
    return run_tasks(std::move(tasks), cfg);
}

}  // namespace divext::cli
