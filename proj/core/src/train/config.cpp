#include "matting/train/config.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "matting/common/errors.hpp"
#include "matting/common/kvfile.hpp"

namespace matting::train {

namespace {

const std::set<std::string> kKnownKeys = {
    "lr", "adam_beta1", "adam_beta2", "adam_eps", "seed",
    "lambda_l", "lambda_1", "lambda_2", "lambda_h",
    "base_width", "depth", "low_h", "low_w", "high_h", "high_w",
    "mpn_epochs", "qun_epochs", "mrn_epochs",
    "batch_mpn", "batch_qun", "batch_mrn",
    "max_steps_mpn", "max_steps_qun", "max_steps_mrn",
    "early_stop", "plateau_patience", "plateau_min_delta",
    "crop_h", "crop_w", "crop_min_alpha", "crop_max_tries",
    "flip_augment", "qun_pair_mode", "mrn_mask_source",
    "degrade_blur_sizes", "degrade_binarize_threshold",
    "degrade_morph_radius_min", "degrade_morph_radius_max",
    "degrade_p_binarize", "degrade_p_morph", "degrade_p_blur",
};

uint64_t parse_seed(const KvMap& kv, uint64_t fallback) {
    auto it = kv.find("seed");
    if (it == kv.end()) return fallback;
    try {
        size_t pos = 0;
        const uint64_t v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw DataError("bad seed value: " + it->second);
    }
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        size_t pos = 0;
        const int v = std::stoi(item, &pos);
        if (pos != item.size()) throw DataError("bad blur size entry: " + item);
        sizes.push_back(v);
    }
    if (sizes.empty()) throw DataError("degrade_blur_sizes is empty");
    return sizes;
}

std::string join_sizes(const std::vector<int>& sizes) {
    std::ostringstream os;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (i) os << ',';
        os << sizes[i];
    }
    return os.str();
}

}  // namespace

void TrainConfig::validate() const {
    if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
        !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0))
        throw std::invalid_argument("bad optimizer hyperparameters");
    for (const double l : {weights.lambda_l, weights.lambda_1, weights.lambda_2,
                           weights.lambda_h})
        if (!(l >= 0.0 && l <= 1.0))
            throw std::invalid_argument("loss weights must be in [0,1]");
    net.validate();
    if (mpn_epochs < 1 || qun_epochs < 1 || mrn_epochs < 1)
        throw std::invalid_argument("epoch counts must be >= 1");
    if (batch_mpn < 1 || batch_qun < 1 || batch_mrn < 1)
        throw std::invalid_argument("batch sizes must be >= 1");
    if (max_steps_mpn < 0 || max_steps_qun < 0 || max_steps_mrn < 0)
        throw std::invalid_argument("step caps must be >= 0");
    if (plateau_patience < 1 || !(plateau_min_delta >= 0.0))
        throw std::invalid_argument("bad plateau settings");
    const int grain = 4 << net.depth;  // mask = crop/4 must split 2^depth times
    if (crop_h < grain || crop_w < grain || crop_h % grain != 0 || crop_w % grain != 0)
        throw std::invalid_argument("crop dims must be positive multiples of 4*2^depth");
    if (!(crop_min_alpha >= 0.0 && crop_min_alpha < 1.0) || crop_max_tries < 1)
        throw std::invalid_argument("bad crop sampling settings");
    degrade_spec.validate();
}

TrainConfig load_train_config(const std::string& path) {
    const KvMap kv = load_kv_file(path);
    for (const auto& [key, value] : kv)
        if (!kKnownKeys.count(key))
            throw DataError(path + ": unknown config key '" + key + "'");
    TrainConfig c;
    c.lr = kv_get_double(kv, "lr", c.lr);
    c.adam_beta1 = kv_get_double(kv, "adam_beta1", c.adam_beta1);
    c.adam_beta2 = kv_get_double(kv, "adam_beta2", c.adam_beta2);
    c.adam_eps = kv_get_double(kv, "adam_eps", c.adam_eps);
    c.seed = parse_seed(kv, c.seed);
    c.weights.lambda_l = kv_get_double(kv, "lambda_l", c.weights.lambda_l);
    c.weights.lambda_1 = kv_get_double(kv, "lambda_1", c.weights.lambda_1);
    c.weights.lambda_2 = kv_get_double(kv, "lambda_2", c.weights.lambda_2);
    c.weights.lambda_h = kv_get_double(kv, "lambda_h", c.weights.lambda_h);
    c.net.base_width = kv_get_int(kv, "base_width", c.net.base_width);
    c.net.depth = kv_get_int(kv, "depth", c.net.depth);
    c.net.low_h = kv_get_int(kv, "low_h", c.net.low_h);
    c.net.low_w = kv_get_int(kv, "low_w", c.net.low_w);
    c.net.high_h = kv_get_int(kv, "high_h", c.net.high_h);
    c.net.high_w = kv_get_int(kv, "high_w", c.net.high_w);
    c.mpn_epochs = kv_get_int(kv, "mpn_epochs", c.mpn_epochs);
    c.qun_epochs = kv_get_int(kv, "qun_epochs", c.qun_epochs);
    c.mrn_epochs = kv_get_int(kv, "mrn_epochs", c.mrn_epochs);
    c.batch_mpn = kv_get_int(kv, "batch_mpn", c.batch_mpn);
    c.batch_qun = kv_get_int(kv, "batch_qun", c.batch_qun);
    c.batch_mrn = kv_get_int(kv, "batch_mrn", c.batch_mrn);
    c.max_steps_mpn = kv_get_int(kv, "max_steps_mpn", c.max_steps_mpn);
    c.max_steps_qun = kv_get_int(kv, "max_steps_qun", c.max_steps_qun);
    c.max_steps_mrn = kv_get_int(kv, "max_steps_mrn", c.max_steps_mrn);
    c.early_stop = kv_get_bool(kv, "early_stop", c.early_stop);
    c.plateau_patience = kv_get_int(kv, "plateau_patience", c.plateau_patience);
    c.plateau_min_delta = kv_get_double(kv, "plateau_min_delta", c.plateau_min_delta);
    c.crop_h = kv_get_int(kv, "crop_h", c.crop_h);
    c.crop_w = kv_get_int(kv, "crop_w", c.crop_w);
    c.crop_min_alpha = kv_get_double(kv, "crop_min_alpha", c.crop_min_alpha);
    c.crop_max_tries = kv_get_int(kv, "crop_max_tries", c.crop_max_tries);
    c.flip_augment = kv_get_bool(kv, "flip_augment", c.flip_augment);

    const std::string pair = kv_get_string(kv, "qun_pair_mode", "mpn");
    if (pair == "mpn")
        c.qun_pair_mode = QunPairMode::Mpn;
    else if (pair == "gt")
        c.qun_pair_mode = QunPairMode::Gt;
    else
        throw DataError(path + ": qun_pair_mode must be mpn or gt");
    const std::string src = kv_get_string(kv, "mrn_mask_source", "pipeline");
    if (src == "pipeline")
        c.mrn_mask_source = MrnMaskSource::Pipeline;
    else if (src == "gt")
        c.mrn_mask_source = MrnMaskSource::Gt;
    else
        throw DataError(path + ": mrn_mask_source must be pipeline or gt");

    if (auto it = kv.find("degrade_blur_sizes"); it != kv.end())
        c.degrade_spec.blur_sizes = parse_sizes(it->second);
    c.degrade_spec.binarize_threshold =
        kv_get_double(kv, "degrade_binarize_threshold", c.degrade_spec.binarize_threshold);
    c.degrade_spec.morph_radius_min =
        kv_get_int(kv, "degrade_morph_radius_min", c.degrade_spec.morph_radius_min);
    c.degrade_spec.morph_radius_max =
        kv_get_int(kv, "degrade_morph_radius_max", c.degrade_spec.morph_radius_max);
    c.degrade_spec.p_binarize = kv_get_double(kv, "degrade_p_binarize", c.degrade_spec.p_binarize);
    c.degrade_spec.p_morph = kv_get_double(kv, "degrade_p_morph", c.degrade_spec.p_morph);
    c.degrade_spec.p_blur = kv_get_double(kv, "degrade_p_blur", c.degrade_spec.p_blur);

    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }
    return c;
}

void save_train_config(const TrainConfig& c, const std::string& path) {
    KvMap kv;
    kv["lr"] = kv_format(c.lr);
    kv["adam_beta1"] = kv_format(c.adam_beta1);
    kv["adam_beta2"] = kv_format(c.adam_beta2);
    kv["adam_eps"] = kv_format(c.adam_eps);
    kv["seed"] = std::to_string(c.seed);
    kv["lambda_l"] = kv_format(c.weights.lambda_l);
    kv["lambda_1"] = kv_format(c.weights.lambda_1);
    kv["lambda_2"] = kv_format(c.weights.lambda_2);
    kv["lambda_h"] = kv_format(c.weights.lambda_h);
    kv["base_width"] = std::to_string(c.net.base_width);
    kv["depth"] = std::to_string(c.net.depth);
    kv["low_h"] = std::to_string(c.net.low_h);
    kv["low_w"] = std::to_string(c.net.low_w);
    kv["high_h"] = std::to_string(c.net.high_h);
    kv["high_w"] = std::to_string(c.net.high_w);
    kv["mpn_epochs"] = std::to_string(c.mpn_epochs);
    kv["qun_epochs"] = std::to_string(c.qun_epochs);
    kv["mrn_epochs"] = std::to_string(c.mrn_epochs);
    kv["batch_mpn"] = std::to_string(c.batch_mpn);
    kv["batch_qun"] = std::to_string(c.batch_qun);
    kv["batch_mrn"] = std::to_string(c.batch_mrn);
    kv["max_steps_mpn"] = std::to_string(c.max_steps_mpn);
    kv["max_steps_qun"] = std::to_string(c.max_steps_qun);
    kv["max_steps_mrn"] = std::to_string(c.max_steps_mrn);
    kv["early_stop"] = c.early_stop ? "true" : "false";
    kv["plateau_patience"] = std::to_string(c.plateau_patience);
    kv["plateau_min_delta"] = kv_format(c.plateau_min_delta);
    kv["crop_h"] = std::to_string(c.crop_h);
    kv["crop_w"] = std::to_string(c.crop_w);
    kv["crop_min_alpha"] = kv_format(c.crop_min_alpha);
    kv["crop_max_tries"] = std::to_string(c.crop_max_tries);
    kv["flip_augment"] = c.flip_augment ? "true" : "false";
    kv["qun_pair_mode"] = c.qun_pair_mode == QunPairMode::Mpn ? "mpn" : "gt";
    kv["mrn_mask_source"] =
        c.mrn_mask_source == MrnMaskSource::Pipeline ? "pipeline" : "gt";
    kv["degrade_blur_sizes"] = join_sizes(c.degrade_spec.blur_sizes);
    kv["degrade_binarize_threshold"] = kv_format(c.degrade_spec.binarize_threshold);
    kv["degrade_morph_radius_min"] = std::to_string(c.degrade_spec.morph_radius_min);
    kv["degrade_morph_radius_max"] = std::to_string(c.degrade_spec.morph_radius_max);
    kv["degrade_p_binarize"] = kv_format(c.degrade_spec.p_binarize);
    kv["degrade_p_morph"] = kv_format(c.degrade_spec.p_morph);
    kv["degrade_p_blur"] = kv_format(c.degrade_spec.p_blur);
    save_kv_file(kv, path);
}

}  // namespace matting::train
