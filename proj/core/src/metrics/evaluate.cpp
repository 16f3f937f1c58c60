#include "matting/metrics/evaluate.hpp"

#include <fstream>

#include "matting/common/errors.hpp"
#include "matting/common/kvfile.hpp"
#include "matting/imagery/png_io.hpp"

namespace matting::metrics {

EvalReport evaluate(const synthdata::DatasetManifest& manifest, const InferFn& infer,
                    const MetricParams& params) {
    EvalReport report;
    report.params = params;
    for (const synthdata::ManifestRecord& rec : manifest.records) {
        if (rec.split != synthdata::Split::Test) continue;
        const imagery::Image img =
            imagery::load_image(manifest.resolve(rec.composite_path).string()).image;
        const imagery::AlphaMatte gt =
            imagery::load_matte(manifest.resolve(rec.alpha_path).string());
        const imagery::AlphaMatte pred = infer(img);
        ImageScore s;
        s.id = rec.composite_path;
        s.sad = sad(pred, gt);
        s.mse = mse(pred, gt);
        s.grad = gradient_error(pred, gt, params.sigma, params.q);
        s.conn = connectivity_error(pred, gt, params.theta, params.step);
        report.per_image.push_back(std::move(s));
    }
    if (report.per_image.empty())
        throw DataError("manifest holds no test records to evaluate");
    ImageScore& agg = report.aggregate;
    agg.id = "aggregate";
    for (const ImageScore& s : report.per_image) {
        agg.sad += s.sad;
        agg.mse += s.mse;
        agg.grad += s.grad;
        agg.conn += s.conn;
    }
    const double n = static_cast<double>(report.per_image.size());
    agg.sad /= n;
    agg.mse /= n;
    agg.grad /= n;
    agg.conn /= n;
    return report;
}

void write_report(const EvalReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report: " + path);
    const MetricParams& p = report.params;
    out << "# matting-eval-report v1\n";
    out << "# sigma\t" << kv_format(p.sigma) << "\tq\t" << kv_format(p.q) << "\ttheta\t"
        << kv_format(p.theta) << "\tstep\t" << kv_format(p.step)
        << "\tconnectivity\t4\n";
    out << "id\tsad\tmse\tgradient\tconnectivity\n";
    auto row = [&out](const ImageScore& s) {
        out << s.id << '\t' << kv_format(s.sad) << '\t' << kv_format(s.mse) << '\t'
            << kv_format(s.grad) << '\t' << kv_format(s.conn) << '\n';
    };
    for (const ImageScore& s : report.per_image) row(s);
    row(report.aggregate);
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace matting::metrics
