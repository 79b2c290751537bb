// SPDX-License-Identifier: Apache-2.0
#include "alesal/eval/metrics.hpp"

#include <sstream>

#include "alesal/common/error.hpp"
#include "alesal/common/num_format.hpp"
#include "alesal/csi/io.hpp"

namespace alesal::eval {

EvalReport evaluate(const std::function<int(const dsp::WindowFeatures&)>& predict,
                    const std::vector<dsp::WindowFeatures>& test) {
    if (test.empty()) throw Error("evaluate: empty test set");
    EvalReport report;
    for (const auto& w : test) {
        if (w.label < 0 || w.label >= 3) throw Error("evaluate: window without a valid label");
        const int pred = predict(w);
        if (pred < 0 || pred >= 3) throw Error("evaluate: prediction out of range");
        ++report.confusion[static_cast<std::size_t>(w.label)][static_cast<std::size_t>(pred)];
    }

    int correct = 0, total = 0;
    for (int c = 0; c < 3; ++c) {
        int tp = report.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        int fn = 0, fp = 0;
        for (int o = 0; o < 3; ++o) {
            if (o != c) {
                fn += report.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)];
                fp += report.confusion[static_cast<std::size_t>(o)][static_cast<std::size_t>(c)];
            }
            total += report.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)];
        }
        correct += tp;
        report.support[static_cast<std::size_t>(c)] = tp + fn;
        const double prec = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double rec = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
        report.precision[static_cast<std::size_t>(c)] = prec;
        report.recall[static_cast<std::size_t>(c)] = rec;
        report.f1[static_cast<std::size_t>(c)] = prec + rec > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        if (report.support[static_cast<std::size_t>(c)] == 0)
            report.warnings.push_back(std::string("class '") + csi::class_name(c) +
                                      "' absent from the test set; its F1 is defined as 0");
    }

    report.accuracy = static_cast<double>(correct) / total;
    double weighted = 0.0, macro = 0.0;
    int support_sum = 0;
    for (int c = 0; c < 3; ++c) {
        weighted += report.support[static_cast<std::size_t>(c)] * report.f1[static_cast<std::size_t>(c)];
        macro += report.f1[static_cast<std::size_t>(c)];
        support_sum += report.support[static_cast<std::size_t>(c)];
    }
    report.weighted_f1 = 100.0 * weighted / support_sum;
    report.macro_f1 = 100.0 * macro / 3.0;
    return report;
}

std::string EvalReport::to_text() const {
    std::ostringstream os;
    os << "accuracy " << format_double(accuracy * 100.0) << "%, weighted F1 "
       << format_double(weighted_f1) << "\n";
    os << "confusion (rows = true, cols = predicted):\n";
    for (int c = 0; c < 3; ++c) {
        os << "  " << csi::class_name(c) << ":";
        for (int o = 0; o < 3; ++o) os << " " << confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)];
        os << "\n";
    }
    for (int c = 0; c < 3; ++c)
        os << "  " << csi::class_name(c) << ": precision " << format_double(precision[static_cast<std::size_t>(c)])
           << " recall " << format_double(recall[static_cast<std::size_t>(c)]) << " f1 "
           << format_double(f1[static_cast<std::size_t>(c)]) << " support "
           << support[static_cast<std::size_t>(c)] << "\n";
    for (const auto& w : warnings) os << "  warning: " << w << "\n";
    return os.str();
}

std::string EvalReport::to_csv() const {
    std::ostringstream os;
    os << "metric,class,value\n";
    os << "accuracy,,"<< format_double(accuracy) << "\n";
    os << "weighted_f1,," << format_double(weighted_f1) << "\n";
    os << "macro_f1,," << format_double(macro_f1) << "\n";
    for (int c = 0; c < 3; ++c) {
        os << "precision," << csi::class_name(c) << "," << format_double(precision[static_cast<std::size_t>(c)]) << "\n";
        os << "recall," << csi::class_name(c) << "," << format_double(recall[static_cast<std::size_t>(c)]) << "\n";
        os << "f1," << csi::class_name(c) << "," << format_double(f1[static_cast<std::size_t>(c)]) << "\n";
        os << "support," << csi::class_name(c) << "," << support[static_cast<std::size_t>(c)] << "\n";
    }
    for (int c = 0; c < 3; ++c)
        for (int o = 0; o < 3; ++o)
            os << "confusion_" << csi::class_name(c) << "_" << csi::class_name(o) << ",,"
               << confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)] << "\n";
    return os.str();
}

}  // namespace alesal::eval
