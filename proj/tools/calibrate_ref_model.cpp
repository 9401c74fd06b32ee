// Fits the line classifier's intercept on the synthetic labeled corpus:
// computes each line's weighted feature sum z, sweeps a decision threshold
// over the observed values, and reports the accuracy-maximizing intercept
// (classify fires at probability 0.5, i.e. at z + intercept = 0).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pbsearch/ref_filter.hpp"
#include "pbsearch/synth.hpp"

using namespace pbsearch;

int main(int argc, char** argv) {
    CLI::App app{"line-classifier intercept calibration"};
    size_t docs = 60;
    uint64_t seed = 4242;
    std::string out;
    app.add_option("--docs", docs, "corpus size, documents");
    app.add_option("--seed", seed, "corpus RNG seed");
    app.add_option("-o,--out", out, "write the calibrated model TSV here");
    CLI11_PARSE(app, argc, argv);

    RefModel model = RefModel::builtin();
    std::vector<double> zs;
    std::vector<bool> labels;

    for (const synth::LabeledDoc& doc : synth::labeled_ref_corpus(docs, seed)) {
        std::vector<LineSpan> lines = split_lines(doc.text);
        if (lines.size() != doc.line_is_ref.size()) {
            std::fprintf(stderr, "label count %zu != line count %zu\n", doc.line_is_ref.size(),
                         lines.size());
            return 1;
        }
        std::vector<std::vector<double>> rows;
        rows.reserve(lines.size());
        for (const LineSpan& line : lines) rows.push_back(model.pattern_density(line.content));
        rows = RefModel::smooth(rows, 3);
        for (size_t i = 0; i < rows.size(); ++i) {
            double z = 0.0;
            for (size_t j = 0; j < rows[i].size(); ++j)
                z += rows[i][j] * model.patterns()[j].weight;
            zs.push_back(z);
            labels.push_back(doc.line_is_ref[i]);
        }
    }

    size_t positives = static_cast<size_t>(std::count(labels.begin(), labels.end(), true));
    std::printf("%zu lines, %zu labeled as references\n", zs.size(), positives);
    std::printf("auc %.6f\n", synth::roc_auc(zs, labels));

    std::vector<double> distinct = zs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<double> candidates;
    candidates.push_back(distinct.front() - 1.0);
    for (size_t i = 0; i + 1 < distinct.size(); ++i)
        candidates.push_back((distinct[i] + distinct[i + 1]) / 2.0);
    candidates.push_back(distinct.back() + 1.0);

    double best_t = candidates.front();
    size_t best_correct = 0;
    for (double t : candidates) {
        size_t correct = 0;
        for (size_t i = 0; i < zs.size(); ++i)
            if ((zs[i] >= t) == static_cast<bool>(labels[i])) ++correct;
        if (correct > best_correct) {
            best_correct = correct;
            best_t = t;
        }
    }

    double intercept = -best_t;
    std::printf("intercept %.6f  (threshold z >= %.6f)\n", intercept, best_t);
    std::printf("accuracy %.4f (%zu / %zu)\n",
                static_cast<double>(best_correct) / static_cast<double>(zs.size()), best_correct,
                zs.size());

    if (!out.empty()) {
        model.set_intercept(intercept);
        std::ofstream of(out, std::ios::binary | std::ios::trunc);
        of << model.to_tsv();
        if (!of) {
            std::fprintf(stderr, "cannot write %s\n", out.c_str());
            return 1;
        }
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}
