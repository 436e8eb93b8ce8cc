#include "tacsel/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>

#include "tacsel/dataset_io.hpp"
#include "tacsel/errors.hpp"
#include "tacsel/experiment.hpp"

namespace tacsel {

namespace fs = std::filesystem;

namespace {

ExperimentConfig load_experiment(const CommandOptions& opts) {
    Config cfg = opts.config_path.empty() ? Config() : Config::load(opts.config_path);
    ExperimentConfig e = ExperimentConfig::from_config(cfg);
    if (opts.seed) e.seed = *opts.seed;
    return e;
}

int guard(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const DataError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitData;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitData;
    }
}

std::string svg_color(size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    return palette[i % 5];
}

struct SeriesPoint {
    double x, mean, stddev;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::map<std::string, std::vector<SeriesPoint>>& series) {
    const double width = 640, height = 420;
    const double ml = 60, mr = 20, mt = 40, mb = 45;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [name, pts] : series) {
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.mean - p.stddev);
            ymax = std::max(ymax, p.mean + p.stddev);
        }
    }
    if (xmin > xmax) throw DataError("nothing to plot for " + title);
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    const auto sy = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    char buf[256];
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    // axes
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ml, height - mb, width - mr, height - mb);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ml, mt, ml, height - mb);
    out << buf;
    for (int i = 0; i <= 4; ++i) {
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\">%.3g</text>\n",
                      ml - 6, sy(yv) + 4, yv);
        out << buf;
    }
    for (int i = 0; i <= static_cast<int>(xmax - xmin); ++i) {
        const double xv = xmin + i;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"11\">%g</text>\n",
                      sx(xv), height - mb + 18, xv);
        out << buf;
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">iteration</text>\n";

    size_t idx = 0;
    for (const auto& [name, pts] : series) {
        const std::string color = svg_color(idx);
        // std band
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (const auto& p : pts) {
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", sx(p.x), sy(p.mean + p.stddev));
            out << buf;
        }
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", sx(it->x), sy(it->mean - it->stddev));
            out << buf;
        }
        out << "\"/>\n";
        // mean line
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : pts) {
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", sx(p.x), sy(p.mean));
            out << buf;
        }
        out << "\"/>\n";
        // legend
        const double ly = mt + 16.0 * static_cast<double>(idx);
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"12\" height=\"12\" fill=\"%s\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%s</text>\n",
                      width - mr - 110.0, ly, color.c_str(), width - mr - 94.0, ly + 10,
                      name.c_str());
        out << buf;
        ++idx;
    }
    out << "</svg>\n";
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace

int cmd_generate(const CommandOptions& opts) {
    return guard([&]() {
        const ExperimentConfig cfg = load_experiment(opts);
        fs::create_directories(opts.out_dir);

        const auto samples = generate_dataset(cfg.classes, cfg.generate_per_class, cfg.ranges,
                                              cfg.sim, cfg.seed);
        std::vector<ManifestEntry> manifest;
        char name[64];
        for (size_t i = 0; i < samples.size(); ++i) {
            std::snprintf(name, sizeof(name), "sample_%05zu.hvts", i);
            const std::string path = (fs::path(opts.out_dir) / name).string();
            write_video(path, samples[i].video);
            manifest.push_back({name, samples[i].video.label, samples[i].params.f_push,
                                samples[i].params.v_push, samples[i].seed});
        }
        write_manifest((fs::path(opts.out_dir) / "manifest.txt").string(), manifest);
        std::cout << "wrote " << samples.size() << " samples to " << opts.out_dir << "\n";
        return kExitOk;
    });
}

int cmd_run(const CommandOptions& opts) {
    return guard([&]() {
        const ExperimentConfig cfg = load_experiment(opts);
        std::vector<Strategy> strategies = {Strategy::entropy, Strategy::variance,
                                            Strategy::random};
        if (opts.strategy) strategies = {strategy_from_string(*opts.strategy)};

        const ExperimentResult result = run_experiment(cfg, strategies);

        fs::create_directories(opts.out_dir);
        char name[64];
        for (const auto& rec : result.runs) {
            std::snprintf(name, sizeof(name), "run_%s_%03d.csv",
                          strategy_name(rec.strategy).c_str(), rec.run_id);
            write_run_csv((fs::path(opts.out_dir) / name).string(), rec, cfg.classes.size());
        }
        write_aggregate_csv((fs::path(opts.out_dir) / "aggregate.csv").string(),
                            result.aggregate);
        std::cout << "wrote " << result.runs.size() << " run records to " << opts.out_dir << "\n";
        return kExitOk;
    });
}

int cmd_sweep_dropout(const CommandOptions& opts) {
    return guard([&]() {
        const ExperimentConfig cfg = load_experiment(opts);
        const auto rows = dropout_sweep(cfg);
        fs::create_directories(opts.out_dir);
        write_sweep_csv((fs::path(opts.out_dir) / "sweep.csv").string(), rows);
        std::cout << "wrote dropout sweep (" << cfg.sweep_rates.size() << " rates) to "
                  << opts.out_dir << "/sweep.csv\n";
        return kExitOk;
    });
}

int cmd_report(const std::string& results_dir, const std::string& out_dir) {
    return guard([&]() {
        const fs::path agg_path = fs::path(results_dir) / "aggregate.csv";
        if (!fs::exists(agg_path)) {
            throw DataError("missing " + agg_path.string() +
                            " (expected files: aggregate.csv, run_<strategy>_<id>.csv)");
        }
        const auto rows = read_aggregate_csv(agg_path.string());
        fs::create_directories(out_dir);

        const char* metrics[] = {"accuracy", "mae", "entropy", "variance"};
        int max_iter = 0;
        for (const auto& r : rows) max_iter = std::max(max_iter, r.iter);

        std::ofstream summary((fs::path(out_dir) / "summary.txt").string(), std::ios::trunc);
        summary << "final-iteration means (iteration " << max_iter << ")\n";
        char buf[160];
        for (const char* metric : metrics) {
            std::map<std::string, std::vector<SeriesPoint>> series;
            for (const auto& r : rows) {
                if (r.metric == metric) {
                    series[r.strategy].push_back({static_cast<double>(r.iter), r.mean, r.stddev});
                }
            }
            if (series.empty()) continue;
            for (auto& [name, pts] : series) {
                std::sort(pts.begin(), pts.end(),
                          [](const SeriesPoint& a, const SeriesPoint& b) { return a.x < b.x; });
            }
            write_svg_plot((fs::path(out_dir) / (std::string(metric) + ".svg")).string(), metric,
                           series);
            for (const auto& [name, pts] : series) {
                std::snprintf(buf, sizeof(buf), "  %-10s %-10s %.17g (std %.17g)\n", metric,
                              name.c_str(), pts.back().mean, pts.back().stddev);
                summary << buf;
            }
        }
        if (!summary) throw DataError("write failed: summary.txt");
        std::cout << "report written to " << out_dir << "\n";
        return kExitOk;
    });
}

}  // namespace tacsel
