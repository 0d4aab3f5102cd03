#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qgh/distance.hpp"
#include "qgh/freefield.hpp"
#include "qgh/net_io.hpp"
#include "qgh/parallel.hpp"
#include "qgh/verify.hpp"

namespace {

using nlohmann::json;
using namespace qgh;

// Exit codes: 0 success, 1 invariant failure (verify), 2 schema error,
// 3 infeasible bridge set, 4 separating-vector failure.

void require_keys(const json& j, const std::string& ctx, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
    if (!j.is_object()) throw schema_error(ctx + ": expected an object");
    for (const auto& k : required)
        if (!j.contains(k)) throw schema_error(ctx + ": missing key '" + k + "'");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const auto& k : required) known = known || key == k;
        for (const auto& k : optional) known = known || key == k;
        if (!known) throw schema_error(ctx + ": unknown key '" + key + "'");
    }
}

cplx parse_cplx(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw schema_error(ctx + ": complex values are [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

Vec parse_cvec(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw schema_error(ctx + ": expected an array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = parse_cplx(j[i], ctx);
    return v;
}

Mat parse_cmat(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty()) throw schema_error(ctx + ": expected a nonempty array of rows");
    Mat m(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(m.cols()))
            throw schema_error(ctx + ": ragged matrix rows");
        for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = parse_cplx(j[r][c], ctx);
    }
    return m;
}

AlgebraPtr parse_algebra(const json& j, const std::string& ctx) {
    require_keys(j, ctx, {"block_dims"}, {"multiplicities", "omega"});
    std::vector<int> dims = j.at("block_dims").get<std::vector<int>>();
    std::vector<int> mults;
    if (j.contains("multiplicities")) mults = j.at("multiplicities").get<std::vector<int>>();
    long total = 0;
    if (mults.empty())
        for (int d : dims) total += d;
    else
        for (std::size_t k = 0; k < dims.size(); ++k)
            total += static_cast<long>(dims[k]) * (k < mults.size() ? mults[k] : 1);
    std::optional<Vec> omega;
    if (j.contains("omega")) omega = parse_cvec(j.at("omega"), ctx + ".omega");
    try {
        return FiniteVNAlgebra::with_representation(dims, mults,
                                                    Mat::Identity(total, total), std::move(omega));
    } catch (const std::invalid_argument& e) {
        throw schema_error(ctx + ": " + e.what());
    }
}

DualLipNormSpec parse_norm(const json& j, const AlgebraPtr& alg, const std::string& ctx) {
    require_keys(j, ctx, {"kind"}, {"t", "omega", "weights", "truncation"});
    std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "kernel") {
            if (!j.contains("t")) throw schema_error(ctx + ": kernel norm needs 't'");
            Mat T = parse_cmat(j.at("t"), ctx + ".t");
            Vec omega = j.contains("omega") ? parse_cvec(j.at("omega"), ctx + ".omega") : alg->omega();
            return DualLipNormSpec::kernel(alg, std::move(T), std::move(omega));
        }
        if (kind == "weighted_entry") {
            if (!j.contains("weights")) throw schema_error(ctx + ": weighted norm needs 'weights'");
            return DualLipNormSpec::weighted_entry(alg, j.at("weights").get<std::vector<double>>());
        }
        if (kind == "effros_marechal") {
            int trunc = j.contains("truncation") ? j.at("truncation").get<int>() : 16;
            return DualLipNormSpec::effros_marechal(alg, trunc);
        }
    } catch (const schema_error&) {
        throw;
    } catch (const std::exception& e) {
        throw schema_error(ctx + ": " + e.what());
    }
    throw schema_error(ctx + ": unknown norm kind '" + kind + "'");
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw schema_error(std::string("malformed JSON: ") + e.what());
    }
}

int cmd_dist(const json& cfg, std::uint64_t seed) {
    require_keys(cfg, "config", {"left", "right", "bridges"}, {"net"});
    int count = 512, probes = 64;
    if (cfg.contains("net")) {
        require_keys(cfg.at("net"), "net", {}, {"count", "probes"});
        if (cfg.at("net").contains("count")) count = cfg.at("net").at("count").get<int>();
        if (cfg.at("net").contains("probes")) probes = cfg.at("net").at("probes").get<int>();
    }
    require_keys(cfg.at("left"), "left", {"algebra", "norm"}, {});
    require_keys(cfg.at("right"), "right", {"algebra", "norm"}, {});
    AlgebraPtr M = parse_algebra(cfg.at("left").at("algebra"), "left.algebra");
    AlgebraPtr N = parse_algebra(cfg.at("right").at("algebra"), "right.algebra");
    DualLipNormSpec LM = parse_norm(cfg.at("left").at("norm"), M, "left.norm");
    DualLipNormSpec LN = parse_norm(cfg.at("right").at("norm"), N, "right.norm");

    bool same = same_algebra(*M, *N);
    Net netM = build_net(M, NetTarget::positive_unit_ball_2x2, count, seed);
    Net netN = same ? netM : build_net(N, NetTarget::positive_unit_ball_2x2, count, seed + 1);
    Net ballM = build_net(M, NetTarget::unit_ball, count, seed + 2);
    Net ballN = build_net(N, NetTarget::unit_ball, count, seed + 3);
    {
        Rng r1(seed, 31), r2(seed, 32);
        ballM.covering_estimate = estimate_covering_opnorm(ballM, probes, r1);
        ballN.covering_estimate = estimate_covering_opnorm(ballN, probes, r2);
    }

    std::vector<BridgeSpec> candidates;
    if (!cfg.at("bridges").is_array() || cfg.at("bridges").empty())
        throw schema_error("bridges: expected a nonempty array");
    for (const auto& bj : cfg.at("bridges")) {
        require_keys(bj, "bridge", {"kind"}, {"unitary", "budget"});
        std::string kind = bj.at("kind").get<std::string>();
        try {
            if (kind == "sum") {
                candidates.push_back(sum_bridge(LM, LN));
            } else if (kind == "kernel") {
                candidates.push_back(kernel_bridge(LM.kernel_op(), LN.kernel_op(), LM.kernel_vec(),
                                                   LM, LN));
            } else if (kind == "iso") {
                Mat U = bj.contains("unitary")
                            ? parse_cmat(bj.at("unitary"), "bridge.unitary")
                            : Mat(Mat::Identity(N->ambient_dim(), M->ambient_dim()));
                candidates.push_back(iso_bridge(IsoMap::from_unitary(M, N, U), LM, LN));
            } else if (kind == "coupler") {
                if (bj.contains("unitary")) {
                    candidates.push_back(
                        coupler_bridge(parse_cmat(bj.at("unitary"), "bridge.unitary"), LM, LN));
                } else {
                    int budget = bj.contains("budget") ? bj.at("budget").get<int>() : 200;
                    candidates.push_back(optimize_coupler(LM, LN, netM, netN, budget, seed + 5));
                }
            } else {
                throw schema_error("bridge: unknown kind '" + kind + "'");
            }
        } catch (const schema_error&) {
            throw;
        } catch (const std::exception& e) {
            std::cerr << "bridge candidate '" << kind << "' infeasible: " << e.what() << "\n";
        }
    }

    EstimateOptions opts;
    opts.covering_probes = probes;
    opts.seed = seed + 7;
    DistanceEstimate est;
    try {
        est = estimate_distance(LM, LN, candidates, netM, netN, radius(LM, ballM), radius(LN, ballN),
                                opts);
    } catch (const bridge_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    std::cout << to_json(est).dump() << "\n";
    return 0;
}

int cmd_freefield(const json& cfg, std::uint64_t seed, const std::filesystem::path& out_dir) {
    require_keys(cfg, "config", {},
                 {"momenta", "cutoff", "beta", "base_mass", "masses", "generators", "net"});
    FreeFieldConfig ff = default_freefield_config();
    std::vector<double> momenta = {0.5, 1.0, 2.0};
    int cutoff = 4;
    if (cfg.contains("momenta")) momenta = cfg.at("momenta").get<std::vector<double>>();
    if (cfg.contains("cutoff")) cutoff = cfg.at("cutoff").get<int>();
    try {
        ff.fock = std::make_shared<TruncatedFock>(momenta, cutoff);
    } catch (const std::exception& e) {
        throw schema_error(std::string("fock: ") + e.what());
    }
    if (cfg.contains("beta")) ff.beta = cfg.at("beta").get<double>();
    if (cfg.contains("base_mass")) ff.base_mass = cfg.at("base_mass").get<double>();
    if (cfg.contains("masses")) ff.masses = cfg.at("masses").get<std::vector<double>>();
    if (cfg.contains("generators")) {
        ff.generators.clear();
        for (const auto& gj : cfg.at("generators"))
            ff.generators.push_back(parse_cvec(gj, "generators"));
    } else if (ff.fock->modes() != 3) {
        ff.generators = default_generators(ff.fock->modes());
    }
    SweepOptions opts;
    opts.seed = seed;
    if (cfg.contains("net")) {
        require_keys(cfg.at("net"), "net", {}, {"count", "probes"});
        if (cfg.at("net").contains("count")) opts.net_count = cfg.at("net").at("count").get<int>();
        if (cfg.at("net").contains("probes"))
            opts.covering_probes = cfg.at("net").at("probes").get<int>();
    }

    SweepResult res;
    try {
        res = mass_sweep(ff, opts);
    } catch (const norm_property_error& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
    std::filesystem::create_directories(out_dir);
    write_file_atomic(out_dir / "mass_sweep.csv", sweep_csv(res));
    write_file_atomic(out_dir / "mass_sweep.json", sweep_json(res).dump(2) + "\n");
    double best = -1.0;
    double at = 0.0;
    for (const auto& row : res.rows)
        if (row.certified_bound > best) {
            best = row.certified_bound;
            at = row.m_prime;
        }
    std::cout << "max_bound=" << format_double(best) << " at m_prime=" << format_double(at) << "\n";
    return 0;
}

int cmd_net(const json& cfg, std::uint64_t seed, const std::filesystem::path& out_dir) {
    require_keys(cfg, "config", {"algebra", "target", "count"}, {"probes"});
    AlgebraPtr alg = parse_algebra(cfg.at("algebra"), "algebra");
    NetTarget target = net_target_from_string(cfg.at("target").get<std::string>());
    int count = cfg.at("count").get<int>();
    int probes = cfg.contains("probes") ? cfg.at("probes").get<int>() : 64;
    Net net;
    try {
        net = build_net(alg, target, count, seed);
    } catch (const std::invalid_argument& e) {
        throw schema_error(e.what());
    }
    Rng rng(seed, 41);
    net.covering_estimate = estimate_covering_opnorm(net, probes, rng);
    net.covering_method = CoveringMethod::empirical;
    std::filesystem::create_directories(out_dir);
    write_file_atomic(out_dir / "net.json", net_to_json(net).dump() + "\n");
    return 0;
}

int cmd_verify(std::uint64_t seed, const std::string& level, const std::string& inject) {
    if (level != "quick" && level != "full") {
        std::cerr << "level must be quick or full\n";
        return 2;
    }
    VerifyReport rep = run_verify(seed, level == "quick" ? VerifyLevel::quick : VerifyLevel::full,
                                  inject);
    for (const auto& s : rep.suites)
        std::cout << "suite " << s.name << ": " << s.passed << "/" << s.total << " checks\n";
    for (const auto& s : rep.suites)
        if (!s.ok()) {
            std::cerr << "invariant failure in suite: " << s.name;
            if (!s.failures.empty()) std::cerr << " (" << s.failures.front() << ")";
            std::cerr << "\n";
            return 1;
        }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified estimates of the dual quantum Gromov-Hausdorff distance between "
                 "finite-dimensional Lip-von Neumann algebras"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string out_dir = ".";
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--seed", seed, "base seed for all randomized steps");
    app.add_option("--threads", threads, "cap on worker threads (0 = machine parallelism)");
    app.add_option("--out", out_dir, "output directory");

    auto* dist = app.add_subcommand("dist", "estimate the distance between two Lip-von Neumann algebras");
    auto* freefield = app.add_subcommand("freefield", "run the free-field mass-continuity sweep");
    auto* verify = app.add_subcommand("verify", "run the cross-module invariant suites");
    auto* net = app.add_subcommand("net", "build a net and estimate its covering radius");

    std::string level = "quick";
    std::string inject;
    verify->add_option("--level", level, "quick or full");
    verify->add_option("--inject", inject, "deliberately sabotage the named suite (testing hook)");

    CLI11_PARSE(app, argc, argv);
    parallel::set_max_threads(threads);

    try {
        if (verify->parsed()) return cmd_verify(seed, level, inject);
        json cfg = json::object();
        if (!config_path.empty()) cfg = load_config(config_path);
        if (dist->parsed()) {
            if (config_path.empty()) throw schema_error("dist requires --config");
            return cmd_dist(cfg, seed);
        }
        if (freefield->parsed()) return cmd_freefield(cfg, seed, out_dir);
        if (net->parsed()) {
            if (config_path.empty()) throw schema_error("net requires --config");
            return cmd_net(cfg, seed, out_dir);
        }
    } catch (const schema_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
