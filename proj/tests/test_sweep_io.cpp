#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "parc/config.hpp"
#include "parc/heatmap.hpp"
#include "parc/io.hpp"
#include "parc/sweep.hpp"

using namespace parc;

namespace {

// Small, fast experiment: short series, few nodes, quick symbols.
ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.benchmarks.front().n_points = 120;
    cfg.benchmarks.front().transient_discard = 40;
    cfg.model = ModelParams{-4.5, -9.0, 1.0};
    cfg.encoding.f_avg = 40.0;
    cfg.encoding.delta_f = 5.0;
    cfg.encoding.warmup_symbols = 10;
    cfg.encoding.set_data_rate(24240.0);
    cfg.features.n_virtual_nodes = 64;
    cfg.features.n_fft = 32;
    cfg.split.washout = 20;
    return cfg;
}

std::filesystem::path tmp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("run_point evaluates the configured benchmark end to end") {
    const PointResult res = run_point(tiny_config());
    REQUIRE(res.benchmarks.size() == 1);
    CHECK(res.benchmarks[0].error.empty());
    CHECK(res.benchmarks[0].nmse > 0.0);
    CHECK(res.benchmarks[0].nmse < 1.0);  // informative features beat the mean
    CHECK(res.regime.label == RegimeLabel::ParametricResonance);
    CHECK(res.trace_psi2_sq.size() >= 4096);
    CHECK(res.spectrum.size() == res.trace_psi2_sq.size());
}

TEST_CASE("a 1x1 sweep equals run_point") {
    ExperimentConfig cfg = tiny_config();
    cfg.axis1 = AxisSpec{ParamAxis::FAvg, 40.0, 40.0, 1};
    cfg.axis2 = AxisSpec{ParamAxis::Delta1, -4.5, -4.5, 1};
    const SweepGrid grid = run_sweep(cfg);
    REQUIRE(grid.cells.size() == 1);
    REQUIRE(grid.cells[0].ok());

    ExperimentConfig point = tiny_config();
    point.workers = 1;
    const PointResult res = run_point(point);
    CHECK(grid.cells[0].nmse == res.benchmarks[0].nmse);
    CHECK(grid.cells[0].regime.label == res.regime.label);
}

TEST_CASE("sweep grids are bit-identical for any worker count") {
    ExperimentConfig cfg = tiny_config();
    cfg.axis1 = AxisSpec{ParamAxis::FAvg, 10.0, 45.0, 3};
    cfg.axis2 = AxisSpec{ParamAxis::Delta1, -6.0, 3.0, 4};

    cfg.workers = 1;
    const SweepGrid serial = run_sweep(cfg);
    cfg.workers = 2;
    const SweepGrid parallel = run_sweep(cfg);

    REQUIRE(serial.cells.size() == 12);
    REQUIRE(parallel.cells.size() == 12);
    CHECK(serial.series_hash == parallel.series_hash);
    for (std::size_t i = 0; i < 12; ++i) {
        const auto& a = serial.cells[i];
        const auto& b = parallel.cells[i];
        CHECK(a.failure == b.failure);
        if (a.ok())
            CHECK(std::memcmp(&a.nmse, &b.nmse, sizeof(double)) == 0);
        CHECK(to_string(a.regime) == to_string(b.regime));
    }
}

TEST_CASE("cell failures are recorded and the sweep continues") {
    ExperimentConfig cfg = tiny_config();
    cfg.encoding.delta_f = 5.0;
    // f_avg = 0 makes the drive negative at delta_f = 5: a config failure in
    // that cell only
    cfg.axis1 = AxisSpec{ParamAxis::FAvg, 0.0, 40.0, 2};
    cfg.axis2 = AxisSpec{ParamAxis::Delta1, -4.5, -4.5, 1};
    const SweepGrid grid = run_sweep(cfg);
    REQUIRE(grid.cells.size() == 2);
    CHECK_FALSE(grid.cells[0].ok());
    CHECK(grid.cells[0].failure.find("negative") != std::string::npos);
    CHECK(grid.cells[1].ok());
    CHECK(grid.any_failure());
}

TEST_CASE("grid csv round-trips") {
    ExperimentConfig cfg = tiny_config();
    cfg.axis1 = AxisSpec{ParamAxis::FAvg, 0.0, 45.0, 2};
    cfg.axis2 = AxisSpec{ParamAxis::Delta1, -4.5, 4.5, 2};
    const SweepGrid grid = run_sweep(cfg);

    const auto path = tmp_file("parc_test_grid.csv");
    write_grid_csv(grid, path);
    const SweepGrid back = read_grid_csv(path);
    REQUIRE(back.cells.size() == grid.cells.size());
    CHECK(back.axis1.steps == grid.axis1.steps);
    CHECK(back.axis2.param == grid.axis2.param);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        if (grid.cells[i].ok()) {
            CHECK(back.cells[i].nmse == grid.cells[i].nmse);  // %.17g is exact
        } else {
            CHECK_FALSE(back.cells[i].failure.empty());
        }
        CHECK(to_string(back.cells[i].regime) == to_string(grid.cells[i].regime));
    }

    // reproducibility: rewriting the same grid gives identical bytes
    const auto path2 = tmp_file("parc_test_grid2.csv");
    write_grid_csv(grid, path2);
    CHECK(slurp(path) == slurp(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("grid metadata snapshot is deterministic and carries the series hash") {
    ExperimentConfig cfg = tiny_config();
    cfg.axis1 = AxisSpec{ParamAxis::FAvg, 40.0, 40.0, 1};
    const SweepGrid grid = run_sweep(cfg);
    const auto p1 = tmp_file("parc_meta1.json");
    const auto p2 = tmp_file("parc_meta2.json");
    write_grid_meta(grid, cfg, p1);
    write_grid_meta(grid, cfg, p2);
    const std::string a = slurp(p1);
    CHECK(a == slurp(p2));
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx",
                  static_cast<unsigned long long>(grid.series_hash));
    CHECK(a.find(hash) != std::string::npos);
    CHECK(a.find("mackey_glass") != std::string::npos);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("series files round-trip exactly") {
    SeriesSpec spec = SeriesSpec::defaults(ChaoticSystem::Rossler);
    spec.n_points = 64;
    spec.transient_discard = 10;
    const auto series = gen_series(spec);

    const auto tpath = tmp_file("parc_series.txt");
    write_series_text(tpath, spec, series);
    CHECK(read_series(tpath) == series);

    const auto bpath = tmp_file("parc_series.bin");
    write_series_binary(bpath, spec, series);
    CHECK(read_series(bpath) == series);
    std::filesystem::remove(tpath);
    std::filesystem::remove(bpath);
}

TEST_CASE("model files round-trip") {
    RidgeModel m;
    m.lambda = 1e-3;
    m.weights = {0.25, -1.5, 3.0};
    m.preprocess_state.retained_mask = {1, 0, 1, 1, 0};
    m.preprocess_state.column_means = {0.1, 0.2, 0.3};
    m.preprocess_state.column_stds = {1.0, 2.0, 3.0};
    m.preprocess_state.epsilon = 1e-10;

    const auto path = tmp_file("parc_model.bin");
    write_model(path, m);
    const RidgeModel back = read_model(path);
    CHECK(back.lambda == m.lambda);
    CHECK(back.weights == m.weights);
    CHECK(back.preprocess_state.retained_mask == m.preprocess_state.retained_mask);
    CHECK(back.preprocess_state.column_means == m.preprocess_state.column_means);
    CHECK(back.preprocess_state.column_stds == m.preprocess_state.column_stds);
    std::filesystem::remove(path);
}

TEST_CASE("config files parse and override") {
    const auto path = tmp_file("parc_test.ini");
    {
        std::ofstream os(path);
        os << "# comment\n"
           << "[benchmark]\n"
           << "system = lorenz\n"
           << "n_points = 500\n"
           << "[model]\n"
           << "delta1 = 2.5\n"
           << "kappa = -7\n"
           << "[encoding]\n"
           << "f_avg = 30\n"
           << "data_rate = 4848\n"
           << "[readout]\n"
           << "lambda = 1e-2\n"
           << "[sweep]\n"
           << "axis1 = f_avg 0 50 11\n"
           << "workers = 2\n";
    }
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.benchmarks.front().system == ChaoticSystem::Lorenz);
    CHECK(cfg.benchmarks.front().n_points == 500);
    CHECK(cfg.model.delta1 == 2.5);
    CHECK(cfg.model.kappa == -7.0);
    CHECK(cfg.encoding.f_avg == 30.0);
    CHECK(cfg.encoding.data_rate() == doctest::Approx(4848.0));
    CHECK(cfg.lambda == 1e-2);
    REQUIRE(cfg.axis1.has_value());
    CHECK(cfg.axis1->steps == 11);
    CHECK(cfg.workers == 2);
    std::filesystem::remove(path);

    ExperimentConfig base;
    CHECK_THROWS_AS(apply_config_entry(base, "model", "bogus", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(base, "nosection", "x", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_entry(base, "model", "delta1", "abc"), ConfigError);
}

TEST_CASE("heatmap rendering") {
    SweepGrid grid;
    grid.axis1 = AxisSpec{ParamAxis::FAvg, 0.0, 10.0, 2};
    grid.axis2 = AxisSpec{ParamAxis::Delta1, -1.0, 1.0, 2};
    grid.cells.resize(4);
    for (auto& c : grid.cells) {
        c.nmse = 0.5;
        c.regime.label = RegimeLabel::SubThreshold;
    }

    SUBCASE("uniform grid renders without boundaries") {
        const auto path = tmp_file("parc_uniform.svg");
        render_heatmap(grid, HeatmapScale::Linear, path);
        const std::string svg = slurp(path);
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("<line") == std::string::npos);  // no regime boundaries
        CHECK(svg.find("url(#fail)") == std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("failed cells are visually distinct and boundaries appear") {
        grid.cells[1].nmse = std::numeric_limits<double>::quiet_NaN();
        grid.cells[1].failure = "divergence";
        grid.cells[3].regime.label = RegimeLabel::ParametricResonance;
        const auto path = tmp_file("parc_failure.svg");
        render_heatmap(grid, HeatmapScale::Log10, path);
        const std::string svg = slurp(path);
        CHECK(svg.find("url(#fail)") != std::string::npos);
        CHECK(svg.find("<line") != std::string::npos);
        CHECK(svg.find("log10(NMSE)") != std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("log scale spans the value decades") {
        grid.cells[0].nmse = 1e-3;
        grid.cells[1].nmse = 1e-1;
        grid.cells[2].nmse = 1e-2;
        grid.cells[3].nmse = 1e-2;
        const auto path = tmp_file("parc_log.svg");
        render_heatmap(grid, HeatmapScale::Log10, path);
        const std::string svg = slurp(path);
        CHECK(svg.find(">-3<") != std::string::npos);
        CHECK(svg.find(">-1<") != std::string::npos);
        std::filesystem::remove(path);
    }
    SUBCASE("empty grid is rejected") {
        SweepGrid empty;
        CHECK_THROWS_AS(render_heatmap(empty, HeatmapScale::Log10, tmp_file("x.svg")),
                        InvalidStateError);
    }
}

TEST_CASE("fnv1a series hash discriminates") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b = a;
    CHECK(hash_series(a) == hash_series(b));
    b[2] = 3.0000000001;
    CHECK(hash_series(a) != hash_series(b));
}
