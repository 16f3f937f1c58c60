// Command-line front end: synth, degrade, train, eval, infer, refine.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matting/common/errors.hpp"
#include "matting/common/kvfile.hpp"
#include "matting/degrade/degrade.hpp"
#include "matting/imagery/png_io.hpp"
#include "matting/metrics/evaluate.hpp"
#include "matting/nets/checkpoint.hpp"
#include "matting/pipeline/pipeline.hpp"
#include "matting/synthdata/dataset_builder.hpp"
#include "matting/synthdata/manifest.hpp"
#include "matting/synthdata/procedural.hpp"
#include "matting/train/config.hpp"
#include "matting/train/trainer.hpp"

namespace fs = std::filesystem;

using matting::DataError;
using matting::imagery::AlphaMatte;
using matting::imagery::Image;
using matting::imagery::MaskQuality;
using matting::imagery::Rng;

namespace {

std::vector<fs::path> list_pngs(const std::string& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw DataError("no .png files in " + dir);
    return out;
}

std::string zero_pad(int n, int width) {
    std::string s = std::to_string(n);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
    std::string fg_dir, fg_coarse_dir, bg_dir, out_dir;
    int k = 10;
    uint64_t seed = 1;
    int procedural_fine = 0, procedural_coarse = 0, procedural_bg = 0;
    int size = 256;
    int test_count = 0;
};

void run_synth(const SynthArgs& a) {
    namespace sd = matting::synthdata;
    Rng root(a.seed);

    std::vector<sd::ForegroundSample> foregrounds;
    std::vector<std::string> fine_ids;
    std::set<std::string> seen_ids;
    auto add_fg = [&](sd::ForegroundSample s) {
        if (!seen_ids.insert(s.id).second)
            throw DataError("duplicate foreground id: " + s.id);
        if (s.quality == MaskQuality::Fine) fine_ids.push_back(s.id);
        foregrounds.push_back(std::move(s));
    };

    auto load_fg_dir = [&](const std::string& dir, MaskQuality quality) {
        for (const auto& path : list_pngs(dir)) {
            auto loaded = matting::imagery::load_image(path.string());
            if (!loaded.alpha)
                throw DataError("foreground has no alpha channel: " + path.string());
            AlphaMatte alpha = *loaded.alpha;
            alpha.quality = quality;
            add_fg({std::move(loaded.image), std::move(alpha), quality,
                    path.stem().string()});
        }
    };
    if (!a.fg_dir.empty()) load_fg_dir(a.fg_dir, MaskQuality::Fine);
    if (!a.fg_coarse_dir.empty()) load_fg_dir(a.fg_coarse_dir, MaskQuality::Coarse);

    const Rng fine_rng = root.split(1);
    for (int i = 0; i < a.procedural_fine; ++i) {
        std::string id = "pfine" + zero_pad(i, 4);
        add_fg(sd::make_procedural_foreground(a.size, a.size, fine_rng.split(i), id));
    }
    const Rng coarse_rng = root.split(2);
    const Rng degrade_rng = root.split(3);
    const matting::degrade::DegradeSpec degrade_spec;
    for (int i = 0; i < a.procedural_coarse; ++i) {
        std::string id = "pcoarse" + zero_pad(i, 4);
        auto sample =
            sd::make_procedural_foreground(a.size, a.size, coarse_rng.split(i), id);
        Rng r = degrade_rng.split(i);
        sample.alpha = matting::degrade::degrade(sample.alpha, degrade_spec, r);
        sample.quality = MaskQuality::Coarse;
        add_fg(std::move(sample));
    }
    if (foregrounds.empty()) throw DataError("no foregrounds given");

    std::vector<sd::BackgroundSample> backgrounds;
    if (!a.bg_dir.empty()) {
        for (const auto& path : list_pngs(a.bg_dir)) {
            auto loaded = matting::imagery::load_image(path.string());
            backgrounds.push_back(
                {std::move(loaded.image), fs::absolute(path).string()});
        }
    }
    if (a.procedural_bg > 0) {
        fs::create_directories(fs::path(a.out_dir) / "bg");
        const Rng bg_rng = root.split(4);
        for (int i = 0; i < a.procedural_bg; ++i) {
            Image bg = sd::make_procedural_background(a.size, a.size, bg_rng.split(i));
            std::string rel = "bg/pbg" + zero_pad(i, 4) + ".png";
            matting::imagery::save_image(bg, (fs::path(a.out_dir) / rel).string());
            backgrounds.push_back({std::move(bg), rel});
        }
    }
    if (backgrounds.empty()) throw DataError("no backgrounds given");

    if (a.test_count > static_cast<int>(fine_ids.size()))
        throw DataError("test count exceeds fine foreground count");
    std::set<std::string> test_ids(fine_ids.end() - a.test_count, fine_ids.end());

    Rng build_rng = root.split(5);
    auto manifest =
        sd::build_dataset(foregrounds, backgrounds, a.k, build_rng, a.out_dir, test_ids);
    std::cout << "wrote " << manifest.records.size() << " records to " << a.out_dir
              << "/manifest.tsv\n";
}

// ---------------------------------------------------------------------------
// degrade

struct DegradeArgs {
    std::string alpha_dir, out_dir, spec_file;
    uint64_t seed = 1;
};

void run_degrade(const DegradeArgs& a) {
    matting::degrade::DegradeSpec spec;
    if (!a.spec_file.empty()) spec = matting::degrade::load_degrade_spec(a.spec_file);
    spec.validate();

    fs::create_directories(a.out_dir);
    const Rng root = Rng(a.seed).split(1);
    int i = 0;
    for (const auto& path : list_pngs(a.alpha_dir)) {
        AlphaMatte alpha = matting::imagery::load_matte(path.string());
        Rng r = root.split(i++);
        auto coarse = matting::degrade::degrade(alpha, spec, r);
        matting::imagery::save_matte(coarse,
                                     (fs::path(a.out_dir) / path.filename()).string());
    }
    std::cout << "degraded " << i << " mattes into " << a.out_dir << "\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
    std::string manifest_file, stage, config_file, out_dir;
};

void run_train(const TrainArgs& a) {
    namespace tr = matting::train;
    auto manifest = matting::synthdata::load_manifest(a.manifest_file);
    tr::TrainConfig config;
    if (!a.config_file.empty()) config = tr::load_train_config(a.config_file);
    config.validate();
    fs::create_directories(a.out_dir);

    auto ckpt = [&](const char* name) {
        return (fs::path(a.out_dir) / name).string();
    };
    if (a.stage == "all") {
        auto trained = tr::train_all(manifest, config, &std::cout, a.out_dir);
        std::cout << "trained mpn/qun/mrn into " << a.out_dir << "\n";
        (void)trained;
        return;
    }

    tr::StageResult result;
    if (a.stage == "mpn") {
        tr::train_mpn(manifest, config, &std::cout, a.out_dir, &result);
    } else if (a.stage == "qun") {
        std::optional<matting::nets::Model> mpn;
        if (config.qun_pair_mode == tr::QunPairMode::Mpn)
            mpn = matting::nets::load_checkpoint_expect(ckpt("mpn.ckpt"),
                                                        matting::nets::NetKind::Mpn);
        tr::train_qun(manifest, mpn ? &*mpn : nullptr, config, &std::cout, a.out_dir,
                      &result);
    } else {  // mrn
        std::optional<matting::nets::Model> mpn, qun;
        if (config.mrn_mask_source == tr::MrnMaskSource::Pipeline) {
            mpn = matting::nets::load_checkpoint_expect(ckpt("mpn.ckpt"),
                                                        matting::nets::NetKind::Mpn);
            qun = matting::nets::load_checkpoint_expect(ckpt("qun.ckpt"),
                                                        matting::nets::NetKind::Qun);
        }
        tr::train_mrn(manifest, mpn ? &*mpn : nullptr, qun ? &*qun : nullptr, config,
                      &std::cout, a.out_dir, &result);
    }
    std::cout << "stage " << a.stage << " done: steps=" << result.steps
              << " epochs=" << result.epochs
              << " loss=" << matting::kv_format(result.final_loss()) << "\n";
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string manifest_file, models_dir, report_file;
};

void run_eval(const EvalArgs& a) {
    auto manifest = matting::synthdata::load_manifest(a.manifest_file);
    auto bundle = matting::pipeline::load_bundle(a.models_dir);
    auto infer_fn = [&](const Image& img) {
        return matting::pipeline::infer(img, bundle).alpha;
    };
    auto report = matting::metrics::evaluate(manifest, infer_fn);
    if (fs::path(a.report_file).has_parent_path())
        fs::create_directories(fs::path(a.report_file).parent_path());
    matting::metrics::write_report(report, a.report_file);

    const auto& agg = report.aggregate;
    std::cout << "sad\tmse\tgradient\tconnectivity\n"
              << matting::kv_format(agg.sad) << '\t' << matting::kv_format(agg.mse)
              << '\t' << matting::kv_format(agg.grad) << '\t'
              << matting::kv_format(agg.conn) << "\n";
}

// ---------------------------------------------------------------------------
// infer / refine

struct InferArgs {
    std::string image_file, models_dir, out_dir, bg_file, mask_file;
};

void write_matte_outputs(const matting::pipeline::MatteResult& result,
                         const InferArgs& a) {
    fs::create_directories(a.out_dir);
    auto out = [&](const char* name) { return (fs::path(a.out_dir) / name).string(); };
    matting::imagery::save_matte(result.alpha, out("alpha.png"));
    matting::imagery::save_image(result.fg_rgb, out("fg.png"));
    if (!a.bg_file.empty()) {
        Image bg = matting::imagery::load_image(a.bg_file).image;
        matting::imagery::save_image(matting::pipeline::recomposite(result, bg),
                                     out("composite.png"));
    }
}

void run_infer(const InferArgs& a) {
    Image img = matting::imagery::load_image(a.image_file).image;
    auto bundle = matting::pipeline::load_bundle(a.models_dir);
    auto result = matting::pipeline::infer(img, bundle);
    write_matte_outputs(result, a);
    std::cout << "wrote alpha.png and fg.png to " << a.out_dir << "\n";
}

void run_refine(const InferArgs& a) {
    Image img = matting::imagery::load_image(a.image_file).image;
    auto mask = matting::imagery::load_matte(a.mask_file, MaskQuality::Coarse);
    auto bundle = matting::pipeline::load_bundle(a.models_dir);
    auto result = matting::pipeline::refine_external_mask(img, mask, bundle);
    write_matte_outputs(result, a);
    std::cout << "wrote alpha.png and fg.png to " << a.out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Human matting pipeline: synthesis, training, and inference"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd =
        app.add_subcommand("synth", "Composite foregrounds over backgrounds");
    synth_cmd->add_option("--fg", synth.fg_dir,
                          "Directory of RGBA foreground cutouts (fine annotations)");
    synth_cmd->add_option("--fg-coarse", synth.fg_coarse_dir,
                          "Directory of RGBA foreground cutouts with coarse masks");
    synth_cmd->add_option("--bg", synth.bg_dir, "Directory of background images");
    synth_cmd->add_option("--k", synth.k, "Backgrounds sampled per foreground")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth_cmd->add_option("--out", synth.out_dir, "Output dataset directory")
        ->required();
    synth_cmd->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
    synth_cmd->add_option("--procedural-fine", synth.procedural_fine,
                          "Generate this many procedural fine foregrounds")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--procedural-coarse", synth.procedural_coarse,
                          "Generate this many procedural coarse foregrounds")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--procedural-bg", synth.procedural_bg,
                          "Generate this many procedural backgrounds")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--size", synth.size, "Procedural image side length")
        ->check(CLI::Range(32, 4096))
        ->capture_default_str();
    synth_cmd->add_option("--test-count", synth.test_count,
                          "Mark the last N fine foregrounds as the test split")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->callback([&] { run_synth(synth); });

    DegradeArgs degrade;
    auto* degrade_cmd =
        app.add_subcommand("degrade", "Turn fine alpha mattes into coarse masks");
    degrade_cmd->add_option("--alpha", degrade.alpha_dir, "Directory of alpha PNGs")
        ->required();
    degrade_cmd->add_option("--out", degrade.out_dir, "Output directory")->required();
    degrade_cmd->add_option("--seed", degrade.seed, "RNG seed")->capture_default_str();
    degrade_cmd->add_option("--spec", degrade.spec_file,
                            "Degradation spec file (tab-separated key-value)");
    degrade_cmd->callback([&] { run_degrade(degrade); });

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train pipeline stages");
    train_cmd->add_option("--manifest", train.manifest_file, "Dataset manifest")
        ->required();
    train_cmd->add_option("--stage", train.stage, "Stage to train")
        ->required()
        ->check(CLI::IsMember({"mpn", "qun", "mrn", "all"}));
    train_cmd->add_option("--config", train.config_file,
                          "Training config file (tab-separated key-value)");
    train_cmd->add_option("--out", train.out_dir, "Checkpoint output directory")
        ->required();
    train_cmd->callback([&] { run_train(train); });

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate on the test split");
    eval_cmd->add_option("--manifest", eval.manifest_file, "Dataset manifest")
        ->required();
    eval_cmd->add_option("--models", eval.models_dir, "Model bundle directory")
        ->required();
    eval_cmd->add_option("--report", eval.report_file, "Report output path")
        ->required();
    eval_cmd->callback([&] { run_eval(eval); });

    InferArgs infer;
    auto* infer_cmd = app.add_subcommand("infer", "Matte a single image");
    infer_cmd->add_option("--image", infer.image_file, "Input image")->required();
    infer_cmd->add_option("--models", infer.models_dir, "Model bundle directory")
        ->required();
    infer_cmd->add_option("--out", infer.out_dir, "Output directory")->required();
    infer_cmd->add_option("--bg", infer.bg_file,
                          "Background to recomposite onto (writes composite.png)");
    infer_cmd->callback([&] { run_infer(infer); });

    InferArgs refine;
    auto* refine_cmd =
        app.add_subcommand("refine", "Refine an external coarse mask");
    refine_cmd->add_option("--image", refine.image_file, "Input image")->required();
    refine_cmd->add_option("--mask", refine.mask_file, "External coarse mask")
        ->required();
    refine_cmd->add_option("--models", refine.models_dir, "Model bundle directory")
        ->required();
    refine_cmd->add_option("--out", refine.out_dir, "Output directory")->required();
    refine_cmd->callback([&] { run_refine(refine); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const matting::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const matting::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
