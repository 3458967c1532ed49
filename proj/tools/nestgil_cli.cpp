// Command-line front end: sample / reconstruct / bench-rate / radon-sim.
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nestgil/io.hpp"
#include "nestgil/metrics.hpp"
#include "nestgil/phantom.hpp"
#include "nestgil/solvers.hpp"

using namespace nestgil;

namespace {

struct Options {
    std::string task = "cs-natural";
    std::string input, output, truth;
    double ratio = 0.25;
    std::vector<int> views = {60, 90, 120, 180};
    int stages = 20;
    uint64_t seed = 2024;
    int patch = 33;
    int overlap = 8;  // anchor stride
    int gil_domains = 6;
    std::string gil_psi = "identity";
    double alpha1 = -0.2, c1 = 0.1, alpha2 = -0.5, c2 = -2.0, alpha3 = 0.5, c3 = 0.0;
    double lambda = 0.05;  // bench-rate l1 weight
    int iters = 300;       // bench-rate iteration budget
};

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_digest(const Options& o) {
    // io paths excluded: the digest identifies the algorithmic configuration
    std::ostringstream ss;
    ss << o.task << '|' << format_double(o.ratio) << '|' << o.stages << '|' << o.seed << '|' << o.patch << '|'
       << o.overlap << '|' << o.gil_domains << '|' << o.gil_psi << '|' << format_double(o.alpha1)
       << '|' << format_double(o.c1) << '|' << format_double(o.alpha2) << '|'
       << format_double(o.c2) << '|' << format_double(o.alpha3) << '|' << format_double(o.c3)
       << '|' << format_double(o.lambda) << '|' << o.iters;
    for (int v : o.views) ss << '|' << v;
    return ss.str();
}

std::string manifest_line(const std::string& command, const Options& o) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "command=%s config=%016llx seed=%llu", command.c_str(),
                  static_cast<unsigned long long>(fnv1a(config_digest(o))),
                  static_cast<unsigned long long>(o.seed));
    return buf;
}

int env_threads() {
    const char* v = std::getenv("NESTGIL_THREADS");
    if (!v) return 0;  // 0 -> all cores
    int n = std::atoi(v);
    if (n < 1) throw config_error("NESTGIL_THREADS must be a positive integer");
    return n;
}

PsiVariant parse_psi(const std::string& s) {
    if (s == "identity") return PsiVariant::identity;
    if (s == "normalized") return PsiVariant::normalized;
    throw config_error("unknown gil-psi variant: " + s);
}

ScheduleParams schedule_params(const Options& o) {
    ScheduleParams p{o.alpha1, o.c1, o.alpha2, o.c2, o.alpha3, o.c3};
    p.validate();
    return p;
}

std::string sibling_path(const std::string& output, const std::string& suffix) {
    std::filesystem::path p(output);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

void cmd_sample(const Options& o) {
    if (!(o.ratio > 0.0 && o.ratio <= 1.0)) throw config_error("ratio must be in (0, 1]");
    if (o.stages < 1) throw config_error("stages must be >= 1");
    Image img = read_pgm(o.input);
    auto grid = PatchGrid::make(img.height, img.width, o.patch, o.overlap);
    const int n = o.patch * o.patch;
    const int m = static_cast<int>(std::lround(o.ratio * n));
    auto phi = gaussian_orthonormal(m, n, o.seed);

    MeasurementFile mf;
    mf.height = img.height;
    mf.width = img.width;
    mf.patch = o.patch;
    mf.stride = o.overlap;
    mf.ratio = o.ratio;
    mf.seed = o.seed;
    mf.m_rows = m;
    mf.n_cols = n;
    mf.data_range = img.data_range;
    for (const auto& [origin, patch] : extract_patches(img, grid))
        mf.blocks.push_back(phi.apply(vectorize(patch)));
    write_measurements(o.output, mf, manifest_line("sample", o));
    std::cout << "sample: " << mf.blocks.size() << " blocks of " << m << " measurements -> "
              << o.output << "\n";
}

void cmd_reconstruct(const Options& o) {
    if (o.task != "cs-natural" && o.task != "ct-sparse")
        throw config_error("unknown task: " + o.task);
    if (o.stages < 1) throw config_error("stages must be >= 1");
    MeasurementFile mf = read_measurements(o.input);
    auto grid = PatchGrid::make(mf.height, mf.width, mf.patch, mf.stride);
    if (mf.blocks.size() != grid.origins.size())
        throw data_error("measurement block count does not match the patch grid");
    auto phi = gaussian_orthonormal(mf.m_rows, mf.n_cols, mf.seed);

    auto extractor = gradient_extractor();
    ReconstructConfig cfg;
    cfg.gil.extractor = &extractor;
    cfg.gil.psi = parse_psi(o.gil_psi);
    cfg.gil.n_domains = o.gil_domains;
    cfg.schedules = schedule_params(o);
    cfg.stages = o.stages;
    cfg.threads = env_threads();
    cfg.record_stage_images = true;
    // solve on unit-scaled intensities so the restoration strength does not
    // depend on the file's maxval, then scale back for output
    std::vector<Eigen::VectorXd> blocks = mf.blocks;
    for (auto& b : blocks) b /= mf.data_range;
    ReconstructResult res = nest_dgil_reconstruct(blocks, phi, grid, mf.height, mf.width, cfg);
    for (double& v : res.image.values) v *= mf.data_range;
    for (auto& stage : res.stage_images)
        for (double& v : stage.values) v *= mf.data_range;
    res.image.data_range = mf.data_range;
    write_pgm(o.output, res.image);

    const bool ct_mode = o.task == "ct-sparse";
    std::vector<std::string> comments{manifest_line("reconstruct", o)};
    std::optional<Image> truth;
    if (!o.truth.empty()) truth = read_pgm(o.truth);

    // per-stage PSNR trace (stage,psnr); psnr column empty without ground truth
    {
        std::ofstream trace(sibling_path(o.output, "_trace.csv"), std::ios::binary);
        if (!trace) throw data_error("cannot write trace CSV");
        for (const auto& c : comments) trace << "# " << c << "\n";
        trace << "stage,psnr\n";
        for (size_t k = 0; k < res.stage_images.size(); ++k) {
            Image stage = res.stage_images[k];
            stage.data_range = mf.data_range;
            trace << (k + 1) << ",";
            if (truth) trace << format_double(psnr(*truth, stage));
            trace << "\n";
        }
    }
    {
        std::ofstream metrics(sibling_path(o.output, "_metrics.csv"), std::ios::binary);
        if (!metrics) throw data_error("cannot write metrics CSV");
        for (const auto& c : comments) metrics << "# " << c << "\n";
        metrics << "name,psnr,ssim,rmse_hu,l1\n";
        if (truth) {
            metrics << evaluate(*truth, res.image, ct_mode).csv_row("reconstruction") << "\n";
        } else {
            metrics << "reconstruction,,,,\n";
        }
    }
    std::cout << "reconstruct: " << o.output;
    if (truth) std::cout << "  psnr=" << format_double(psnr(*truth, res.image)) << " dB";
    std::cout << "\n";
}

double loglog_slope(const std::vector<double>& gap, int k_lo, int k_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = k_lo; k <= k_hi && k < static_cast<int>(gap.size()); ++k) {
        if (gap[k] <= 0.0) continue;
        double x = std::log10(static_cast<double>(k)), y = std::log10(gap[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 5) throw divergence_error(n, "too few positive objective gaps for a slope fit");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void cmd_bench_rate(const Options& o) {
    if (o.iters < 210) throw config_error("bench-rate needs at least 210 iterations");
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto phi = gaussian_orthonormal(20, 50, o.seed);
    Eigen::VectorXd y(20);
    for (int i = 0; i < 20; ++i) y[i] = gauss(rng);
    const double lam = o.lambda;
    ObjectiveFn F = [&phi, &y, lam](const Eigen::VectorXd& x) {
        return 0.5 * (phi.apply(x) - y).squaredNorm() + lam * x.lpNorm<1>();
    };
    auto fixed_threshold = [lam](double t) {
        return RestoreFn([t](const Eigen::VectorXd& m, int) {
            Eigen::VectorXd out(m.size());
            for (Eigen::Index i = 0; i < m.size(); ++i) out[i] = prox_l1(m[i], t);
            return out;
        });
    };

    SolveOptions oracle;
    oracle.n_iters = 50000;
    oracle.mu = [](int) { return 1.0; };
    const double f_star = F(fista_solve(y, phi, fixed_threshold(lam), oracle).x);

    SolveOptions base;
    base.n_iters = o.iters;
    base.mu = [](int) { return 1.0; };
    base.objective = F;
    auto ista = ista_solve(y, phi, fixed_threshold(lam), base);
    auto fista = fista_solve(y, phi, fixed_threshold(lam), base);

    // provably O(1/k^2) tuning: gamma_k = 2/(k+1), mu_k = (k+1)/2, threshold lam*mu_k
    SolveOptions accel = base;
    accel.mu = [](int k) { return (k + 1) / 2.0; };
    accel.gamma = [](int k) { return 2.0 / (k + 1); };
    RestoreFn growing_threshold = [lam](const Eigen::VectorXd& m, int k) {
        const double t = lam * (k + 1) / 2.0;
        Eigen::VectorXd out(m.size());
        for (Eigen::Index i = 0; i < m.size(); ++i) out[i] = prox_l1(m[i], t);
        return out;
    };
    auto nest = nesterov2_solve(y, phi, growing_threshold, accel);

    auto gaps = [f_star](const SolverState& st) {
        std::vector<double> g(st.objective_trace.size());
        for (size_t i = 0; i < g.size(); ++i) g[i] = st.objective_trace[i] - f_star;
        return g;
    };
    auto g_ista = gaps(ista), g_fista = gaps(fista), g_nest = gaps(nest);
    double s_ista = loglog_slope(g_ista, 10, 200);
    double s_fista = loglog_slope(g_fista, 10, 200);
    double s_nest = loglog_slope(g_nest, 10, 200);

    std::vector<std::vector<double>> rows;
    for (int k = 0; k <= o.iters; ++k)
        rows.push_back({static_cast<double>(k), g_ista[k], g_fista[k], g_nest[k]});
    write_csv_rows(o.output,
                   {manifest_line("bench-rate", o),
                    "columns: k,gap_ista,gap_fista,gap_nesterov2",
                    "slope_ista=" + format_double(s_ista),
                    "slope_fista=" + format_double(s_fista),
                    "slope_nesterov2=" + format_double(s_nest)},
                   rows);
    std::cout << "bench-rate: slopes over k in [10,200]: ista=" << format_double(s_ista)
              << " fista=" << format_double(s_fista)
              << " nesterov2=" << format_double(s_nest) << "\n";
}

void cmd_radon_sim(const Options& o) {
    if (o.stages < 1) throw config_error("stages must be >= 1");
    Image truth = o.input.empty() ? shepp_logan(64) : read_pgm(o.input);
    if (truth.height > 64 || truth.width > 64 || truth.height != truth.width)
        throw config_error("radon-sim phantom must be square and at most 64x64");
    if (truth.data_range != 1.0) {  // solve on unit-scaled intensities
        for (double& v : truth.values) v /= truth.data_range;
        truth.data_range = 1.0;
    }
    const int side = truth.height;
    const int ndet = 2 * static_cast<int>(std::ceil(side * std::sqrt(0.5))) + 1;
    auto grid = PatchGrid::make(side, side, side, side);
    auto extractor = gradient_extractor();

    std::vector<std::vector<double>> summary;
    std::vector<std::string> summary_comments{manifest_line("radon-sim", o),
                                             "columns: views,psnr,ssim,rmse_hu,l1"};
    double prev_psnr = -1e300;
    for (int views : o.views) {
        if (views < 1) throw config_error("view count must be positive");
        auto phi = radon_parallel(side, views, ndet);
        Eigen::VectorXd sino = phi.apply(vectorize(truth));
        Eigen::MatrixXd sino_mat(views, ndet);
        for (int a = 0; a < views; ++a)
            for (int d = 0; d < ndet; ++d) sino_mat(a, d) = sino[a * ndet + d];
        const std::string tag = "_v" + std::to_string(views);
        write_csv_matrix(sibling_path(o.output, tag + "_sinogram.csv"), sino_mat,
                         {manifest_line("radon-sim", o)});

        ReconstructConfig cfg;
        cfg.gil.extractor = &extractor;
        cfg.gil.psi = parse_psi(o.gil_psi);
        cfg.gil.n_domains = o.gil_domains;
        cfg.schedules = schedule_params(o);
        cfg.stages = o.stages;
        cfg.lipschitz = phi.normal_operator_norm();
        cfg.threads = env_threads();
        ReconstructResult res =
            nest_dgil_reconstruct({sino}, phi, grid, side, side, cfg);
        res.image.data_range = truth.data_range;
        write_pgm(sibling_path(o.output, tag + ".pgm"), res.image);

        MetricReport rep = evaluate(truth, res.image, /*ct_mode=*/true);
        summary.push_back({static_cast<double>(views), rep.psnr, rep.ssim, *rep.rmse_hu, rep.l1});
        std::cout << "radon-sim: views=" << views << " psnr=" << format_double(rep.psnr)
                  << " dB\n";
        if (rep.psnr < prev_psnr - 0.5)
            throw divergence_error(views, "PSNR decreased with more views beyond slack");
        prev_psnr = std::max(prev_psnr, rep.psnr);
    }
    write_csv_rows(o.output, summary_comments, summary);
}

// Registers options both as flags and as flat key=value config-file keys.
// Flags win over file values; unknown file keys are rejected by name.
struct Command {
    CLI::App* cmd;
    std::string config_path;
    std::map<std::string, std::pair<CLI::Option*, std::function<void(const std::string&)>>> keys;

    explicit Command(CLI::App* c) : cmd(c) {
        cmd->add_option("--config", config_path, "flat key=value config file (flags win)");
    }

    template <typename T>
    CLI::Option* opt(const std::string& flag, T& var, const std::string& desc) {
        CLI::Option* op = cmd->add_option(flag, var, desc);
        keys[flag.substr(2)] = {op, [&var, flag](const std::string& text) {
                                    if (!CLI::detail::lexical_cast(text, var))
                                        throw config_error("config: bad value for " +
                                                           flag.substr(2) + ": " + text);
                                }};
        return op;
    }

    void apply_config_file() const {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw config_error("config: cannot open " + config_path);
        std::string line;
        while (std::getline(in, line)) {
            auto start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos || line[start] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw config_error("config: expected key=value: " + line);
            auto trim = [](std::string s) {
                auto a = s.find_first_not_of(" \t\r");
                auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
            auto it = keys.find(key);
            if (it == keys.end()) throw config_error("config: unknown key: " + key);
            if (it->second.first->count() > 0) continue;  // flag wins
            it->second.second(value);
        }
    }
};

void add_common(Command& c, Options& o) {
    c.opt("--seed", o.seed, "RNG seed");
    c.opt("--stages", o.stages, "solver stage count");
    c.opt("--gil-domains", o.gil_domains, "series term count in the restoration cascade");
    c.opt("--gil-psi", o.gil_psi, "feature nonlinearity: identity or normalized");
    c.opt("--alpha1", o.alpha1, "step-length schedule rate");
    c.opt("--c1", o.c1, "step-length schedule offset");
    c.opt("--alpha2", o.alpha2, "threshold schedule rate");
    c.opt("--c2", o.c2, "threshold schedule offset");
    c.opt("--alpha3", o.alpha3, "relaxation schedule rate");
    c.opt("--c3", o.c3, "relaxation schedule offset");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block compressed-sensing reconstruction toolkit"};
    app.require_subcommand(1);
    Options o;

    Command sample(app.add_subcommand("sample", "compress an image into per-patch measurements"));
    sample.cmd->add_option("--input", o.input, "input PGM image")->required();
    sample.cmd->add_option("--output", o.output, "output measurement CSV")->required();
    sample.opt("--ratio", o.ratio, "measurement ratio M/N in (0,1]");
    sample.opt("--patch", o.patch, "patch side length");
    sample.opt("--overlap", o.overlap, "patch anchor stride");
    add_common(sample, o);

    Command rec(app.add_subcommand("reconstruct", "reconstruct an image from measurements"));
    rec.opt("--task", o.task, "cs-natural or ct-sparse");
    rec.cmd->add_option("--input", o.input, "measurement CSV from sample")->required();
    rec.cmd->add_option("--output", o.output, "output PGM image")->required();
    rec.cmd->add_option("--truth", o.truth, "ground-truth PGM for metrics");
    add_common(rec, o);

    Command bench(app.add_subcommand("bench-rate", "convergence-rate benchmark on a seeded lasso"));
    bench.cmd->add_option("--output", o.output, "trace CSV")->required();
    bench.opt("--lambda", o.lambda, "l1 weight");
    bench.opt("--iters", o.iters, "iteration budget (>= 210)");
    add_common(bench, o);

    Command radon(app.add_subcommand("radon-sim", "sparse-view tomography simulation"));
    radon.cmd->add_option("--input", o.input, "phantom PGM (default: built-in head phantom)");
    radon.cmd->add_option("--output", o.output, "summary CSV; per-view files use its stem")
        ->required();
    radon.cmd->add_option("--views", o.views, "view counts to simulate")->delimiter(',');
    add_common(radon, o);

    try {
        app.parse(argc, argv);
        for (const Command* c : {&sample, &rec, &bench, &radon})
            if (c->cmd->parsed()) c->apply_config_file();
        if (sample.cmd->parsed()) cmd_sample(o);
        if (rec.cmd->parsed()) cmd_reconstruct(o);
        if (bench.cmd->parsed()) cmd_bench_rate(o);
        if (radon.cmd->parsed()) cmd_radon_sim(o);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags/config keys are config errors
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const divergence_error& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
