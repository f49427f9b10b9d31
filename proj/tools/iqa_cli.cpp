// Batch front end: scoring, quality-map export, fusion, manifest evaluation,
// pristine-model fitting, synthetic distortion, and loss evaluation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iqa/errors.hpp"
#include "iqa/eval.hpp"
#include "iqa/imageio.hpp"
#include "iqa/losses.hpp"
#include "iqa/maps.hpp"
#include "iqa/niqe.hpp"
#include "iqa/synthetic.hpp"

using nlohmann::json;

namespace {

// Every overridable metric parameter, with the documented defaults. The
// effective values are echoed into report provenance.
struct MetricFlags {
  int ssim_window = 11;
  double ssim_sigma = 1.5;
  double ssim_c1 = 1e-4;
  double ssim_c2 = 9e-4;
  int ms_scales = 5;
  int fsim_scales = 4;
  int fsim_orientations = 4;
  double fsim_wavelength = 6.0;
  std::string fsim_gradient = "scharr";
  double mdsi_c1 = 140.0 / 65025.0;
  double mdsi_c2 = 55.0 / 65025.0;
  double mdsi_c3 = 550.0 / 65025.0;
  double mdsi_mix = 0.6;
  int niqe_scales = 2;
  int niqe_patch = 96;
  double niqe_sharpness = 0.75;
  std::string pristine_path;

  CLI::Option* niqe_scales_opt = nullptr;
  CLI::Option* niqe_patch_opt = nullptr;

  void attach(CLI::App* sub) {
    sub->add_option("--ssim-window", ssim_window, "SSIM window size (odd)")
        ->capture_default_str();
    sub->add_option("--ssim-sigma", ssim_sigma, "SSIM window stddev")->capture_default_str();
    sub->add_option("--ssim-c1", ssim_c1, "SSIM luminance stabilizer")->capture_default_str();
    sub->add_option("--ssim-c2", ssim_c2, "SSIM contrast stabilizer")->capture_default_str();
    sub->add_option("--ms-scales", ms_scales, "MS-SSIM scale count")->capture_default_str();
    sub->add_option("--fsim-scales", fsim_scales, "log-Gabor scale count")
        ->capture_default_str();
    sub->add_option("--fsim-orientations", fsim_orientations, "log-Gabor orientation count")
        ->capture_default_str();
    sub->add_option("--fsim-wavelength", fsim_wavelength, "smallest log-Gabor wavelength")
        ->capture_default_str();
    sub->add_option("--fsim-gradient", fsim_gradient, "gradient operator")
        ->check(CLI::IsMember({"scharr", "sobel", "prewitt"}))
        ->capture_default_str();
    sub->add_option("--mdsi-c1", mdsi_c1, "MDSI gradient stabilizer")->capture_default_str();
    sub->add_option("--mdsi-c2", mdsi_c2, "MDSI fused-gradient stabilizer")
        ->capture_default_str();
    sub->add_option("--mdsi-c3", mdsi_c3, "MDSI chromaticity stabilizer")
        ->capture_default_str();
    sub->add_option("--mdsi-mix", mdsi_mix, "MDSI gradient/chromaticity mix")
        ->capture_default_str();
    niqe_scales_opt =
        sub->add_option("--niqe-scales", niqe_scales, "NIQE scale count")->capture_default_str();
    niqe_patch_opt =
        sub->add_option("--niqe-patch", niqe_patch, "NIQE patch size")->capture_default_str();
    sub->add_option("--niqe-sharpness", niqe_sharpness, "share of sharpest patches kept")
        ->capture_default_str();
    sub->add_option("--pristine", pristine_path, "pristine NIQE model path");
  }

  iqa::MetricParams build() const {
    iqa::MetricParams p;
    p.ssim.window = iqa::gaussian_window(ssim_window, ssim_sigma);
    p.ssim.c1 = ssim_c1;
    p.ssim.c2 = ssim_c2;
    p.ms_ssim.base = p.ssim;
    p.ms_ssim.scales = ms_scales;
    p.fsim.bank.scales = fsim_scales;
    p.fsim.bank.orientations = fsim_orientations;
    p.fsim.bank.min_wavelength = fsim_wavelength;
    if (fsim_gradient == "scharr") p.fsim.gradient_operator = iqa::GradientOperator::scharr;
    if (fsim_gradient == "sobel") p.fsim.gradient_operator = iqa::GradientOperator::sobel;
    if (fsim_gradient == "prewitt") p.fsim.gradient_operator = iqa::GradientOperator::prewitt;
    p.mdsi.c1 = mdsi_c1;
    p.mdsi.c2 = mdsi_c2;
    p.mdsi.c3 = mdsi_c3;
    p.mdsi.mix_weight = mdsi_mix;
    p.niqe.scales = niqe_scales;
    p.niqe.patch_size = niqe_patch;
    p.niqe.sharpness_fraction = niqe_sharpness;
    if (!pristine_path.empty()) {
      p.pristine = iqa::load_mvg_model(pristine_path);
      // Follow the model's geometry unless explicitly overridden.
      if (niqe_scales_opt && niqe_scales_opt->count() == 0) p.niqe.scales = p.pristine->scales;
      if (niqe_patch_opt && niqe_patch_opt->count() == 0)
        p.niqe.patch_size = p.pristine->patch_size;
    }
    return p;
  }

  json provenance(const iqa::MetricParams& p) const {
    json j;
    j["ssim"] = {{"window", ssim_window}, {"sigma", ssim_sigma}, {"c1", ssim_c1},
                 {"c2", ssim_c2}};
    j["ms_ssim"] = {{"scales", ms_scales}};
    j["fsim"] = {{"scales", fsim_scales},
                 {"orientations", fsim_orientations},
                 {"wavelength", fsim_wavelength},
                 {"gradient", fsim_gradient}};
    j["mdsi"] = {{"c1", mdsi_c1}, {"c2", mdsi_c2}, {"c3", mdsi_c3}, {"mix", mdsi_mix}};
    j["niqe"] = {{"scales", p.niqe.scales},
                 {"patch_size", p.niqe.patch_size},
                 {"sharpness_fraction", niqe_sharpness}};
    j["pristine"] = pristine_path.empty() ? json(nullptr) : json(pristine_path);
    return j;
  }
};

iqa::MapConfigs map_configs(const iqa::MetricParams& p) {
  iqa::MapConfigs c;
  c.ssim = p.ssim;
  c.ms_ssim = p.ms_ssim;
  c.fsim = p.fsim;
  c.mdsi = p.mdsi;
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw iqa::IoError("cannot open for writing: " + path);
  f << text;
  if (!f) throw iqa::IoError("write failed: " + path);
}

// Image reference in a loss batch: a path, or a generator directive
// {"generate": kind, "height": h, "width": w, ...}.
struct BatchImage {
  bool generated = false;
  bool stochastic = false;
  std::string path;
  std::string kind;
  int height = 0, width = 0;
  double sigma = 0.15;
  int cell = 8;
  double cycles = 8.0;
};

BatchImage parse_batch_image(const json& j, const std::string& where) {
  BatchImage b;
  if (j.is_string()) {
    b.path = j.get<std::string>();
    return b;
  }
  if (!j.is_object() || !j.contains("generate"))
    throw iqa::IoError(where + ": expected a path or a generate directive");
  b.generated = true;
  b.kind = j.at("generate").get<std::string>();
  if (b.kind != "pink" && b.kind != "uniform" && b.kind != "gaussian" && b.kind != "ramp" &&
      b.kind != "checkerboard" && b.kind != "grating")
    throw iqa::IoError(where + ": unknown generator '" + b.kind + "'");
  b.stochastic = b.kind == "pink" || b.kind == "uniform" || b.kind == "gaussian" ||
                 b.kind == "grating";
  if (!j.contains("height") || !j.contains("width"))
    throw iqa::IoError(where + ": generate directive needs height and width");
  b.height = j.at("height").get<int>();
  b.width = j.at("width").get<int>();
  if (j.contains("sigma")) b.sigma = j.at("sigma").get<double>();
  if (j.contains("cell")) b.cell = j.at("cell").get<int>();
  if (j.contains("cycles")) b.cycles = j.at("cycles").get<double>();
  return b;
}

iqa::ImagePlane realize_batch_image(const BatchImage& b, std::uint64_t seed) {
  if (!b.generated) return iqa::to_grayscale(iqa::load_image(b.path));
  if (b.kind == "pink") return iqa::pink_noise(b.height, b.width, seed);
  if (b.kind == "uniform") return iqa::uniform_noise(b.height, b.width, seed);
  if (b.kind == "gaussian") return iqa::gaussian_noise(b.height, b.width, seed, b.sigma);
  if (b.kind == "ramp") return iqa::ramp(b.height, b.width);
  if (b.kind == "checkerboard") return iqa::checkerboard(b.height, b.width, b.cell);
  return iqa::grating_texture(b.height, b.width, seed, b.cycles);
}

double jnum(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

int run_loss_eval(const std::string& batch_path, bool seed_given, std::uint64_t seed,
                  const MetricFlags& flags) {
  json batch;
  {
    std::ifstream f(batch_path);
    if (!f) throw iqa::IoError("cannot open batch file: " + batch_path);
    try {
      batch = json::parse(f);
    } catch (const json::exception& e) {
      throw iqa::IoError("batch file " + batch_path + ": " + e.what());
    }
  }

  iqa::DualNormSpec spec;
  iqa::PenaltyConfig penalty;
  iqa::LbpWeights weights;
  std::optional<json> gan;
  std::vector<json> sample_specs;
  try {
    if (batch.contains("dual_norm")) {
      const json& d = batch.at("dual_norm");
      const std::string variant = d.contains("variant") ? d.at("variant").get<std::string>()
                                                        : std::string("lp");
      if (variant == "lp")
        spec.variant = iqa::DualNormSpec::Variant::lp;
      else if (variant == "ssim_db")
        spec.variant = iqa::DualNormSpec::Variant::ssim_db;
      else if (variant == "niqe_mvg")
        spec.variant = iqa::DualNormSpec::Variant::niqe_mvg;
      else
        throw iqa::IoError("batch file: unknown dual_norm variant '" + variant + "'");
      spec.p = jnum(d, "p", 2.0);
    }
    if (batch.contains("penalty")) {
      penalty.lambda = jnum(batch.at("penalty"), "lambda", penalty.lambda);
      penalty.gamma = jnum(batch.at("penalty"), "gamma", penalty.gamma);
    }
    if (batch.contains("lbp_weights")) {
      weights.lambda1 = jnum(batch.at("lbp_weights"), "lambda1", weights.lambda1);
      weights.lambda2 = jnum(batch.at("lbp_weights"), "lambda2", weights.lambda2);
      weights.lambda3 = jnum(batch.at("lbp_weights"), "lambda3", weights.lambda3);
    }
    if (batch.contains("gan")) gan = batch.at("gan");
    if (!batch.contains("samples") || !batch.at("samples").is_array() ||
        batch.at("samples").empty())
      throw iqa::IoError("batch file: 'samples' must be a nonempty array");
    for (const json& s : batch.at("samples")) sample_specs.push_back(s);
  } catch (const json::exception& e) {
    throw iqa::IoError("batch file " + batch_path + ": " + e.what());
  }

  struct SampleInputs {
    BatchImage grad;
    std::optional<BatchImage> x, xhat;
    std::optional<double> d_x, d_xhat;
  };
  std::vector<SampleInputs> inputs;
  bool any_stochastic = false;
  for (std::size_t i = 0; i < sample_specs.size(); ++i) {
    const std::string where = "sample " + std::to_string(i + 1);
    const json& s = sample_specs[i];
    SampleInputs in;
    try {
      if (!s.contains("grad")) throw iqa::IoError(where + ": missing 'grad'");
      in.grad = parse_batch_image(s.at("grad"), where + " grad");
      if (s.contains("x")) in.x = parse_batch_image(s.at("x"), where + " x");
      if (s.contains("xhat")) in.xhat = parse_batch_image(s.at("xhat"), where + " xhat");
      if (s.contains("d_x")) in.d_x = s.at("d_x").get<double>();
      if (s.contains("d_xhat")) in.d_xhat = s.at("d_xhat").get<double>();
    } catch (const json::exception& e) {
      throw iqa::IoError("batch file " + where + ": " + e.what());
    }
    any_stochastic = any_stochastic || in.grad.stochastic ||
                     (in.x && in.x->stochastic) || (in.xhat && in.xhat->stochastic);
    inputs.push_back(std::move(in));
  }
  if (any_stochastic && !seed_given) {
    std::cerr << "error: --seed is required when the batch generates stochastic images\n";
    return 2;
  }

  iqa::MetricParams params = flags.build();

  std::vector<double> norms;
  std::vector<iqa::ImagePlane> grads;
  std::vector<iqa::CriticSample> critic;
  bool have_critic = true;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::uint64_t base = seed + 16 * static_cast<std::uint64_t>(i);
    iqa::ImagePlane grad = realize_batch_image(inputs[i].grad, base + 2);
    norms.push_back(iqa::dual_norm(grad, spec));
    grads.push_back(std::move(grad));
    if (inputs[i].x && inputs[i].xhat && inputs[i].d_x && inputs[i].d_xhat) {
      iqa::CriticSample cs;
      cs.d_x = *inputs[i].d_x;
      cs.d_xhat = *inputs[i].d_xhat;
      cs.x = realize_batch_image(*inputs[i].x, base + 0);
      cs.xhat = realize_batch_image(*inputs[i].xhat, base + 1);
      critic.push_back(std::move(cs));
    } else {
      have_critic = false;
    }
  }

  const double banach = iqa::banach_gp(norms, penalty);
  const double one = iqa::one_gp(norms);

  std::optional<double> ssim_term;
  if (have_critic) ssim_term = iqa::ssim_gp(critic, params.ssim);
  if (!ssim_term && weights.lambda2 != 0.0)
    throw iqa::InvalidInput(
        "ssim penalty requires x, xhat, d_x, d_xhat on every sample (or lambda2 = 0)");

  std::optional<double> niqe_term;
  if (params.pristine) {
    // Gradient fields reuse the patch statistics pipeline against the
    // pristine model.
    std::vector<iqa::MvgModel> models;
    for (const iqa::ImagePlane& g : grads)
      models.push_back(iqa::fit_image_mvg(g, params.niqe, false));
    niqe_term = iqa::niqe_regularizer(models, *params.pristine);
  }
  if (!niqe_term && weights.lambda1 != 0.0)
    throw iqa::InvalidInput("pristine model required for the niqe penalty (or lambda1 = 0)");

  const double combined =
      iqa::l_bp(niqe_term.value_or(0.0), ssim_term.value_or(0.0), one, weights);

  std::optional<double> gan_value;
  if (gan) {
    try {
      gan_value = iqa::gan_objective(gan->at("d_x").get<double>(),
                                     gan->at("d_g_xhat").get<double>(),
                                     jnum(*gan, "s", 0.0), combined);
    } catch (const json::exception& e) {
      throw iqa::IoError("batch file gan section: " + std::string(e.what()));
    }
  }

  json out;
  out["banach_gp"] = banach;
  out["dual_norms"] = norms;
  out["gan_objective"] = gan_value ? json(*gan_value) : json(nullptr);
  out["l_bp"] = combined;
  out["niqe_gp"] = niqe_term ? json(*niqe_term) : json(nullptr);
  out["one_gp"] = one;
  out["samples"] = inputs.size();
  out["ssim_gp"] = ssim_term ? json(*ssim_term) : json(nullptr);
  std::cout << out.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"image quality metrics, quality maps, and loss evaluation"};
  app.require_subcommand(1);
  const std::vector<std::string> metric_names = {"ssim", "ms-ssim", "fsim",
                                                 "fsimc", "mdsi", "niqe"};
  const std::vector<std::string> map_metric_names = {"ssim", "ms-ssim", "fsim", "mdsi"};

  // score
  auto* score_cmd = app.add_subcommand("score", "score one reference/test pair");
  std::string sc_metric, sc_ref, sc_test;
  MetricFlags sc_flags;
  score_cmd->add_option("--metric", sc_metric, "metric name")
      ->required()
      ->check(CLI::IsMember(metric_names));
  score_cmd->add_option("--ref", sc_ref, "reference image")->required();
  score_cmd->add_option("--test", sc_test, "test image")->required();
  sc_flags.attach(score_cmd);

  // map
  auto* map_cmd = app.add_subcommand("map", "export a quality map");
  std::string mp_metric, mp_ref, mp_test, mp_out;
  double mp_alpha = 1.0;
  MetricFlags mp_flags;
  map_cmd->add_option("--metric", mp_metric, "map metric")
      ->required()
      ->check(CLI::IsMember(map_metric_names));
  map_cmd->add_option("--ref", mp_ref, "reference image")->required();
  map_cmd->add_option("--test", mp_test, "test image")->required();
  map_cmd->add_option("--alpha", mp_alpha, "intensity-scaling exponent")
      ->check(CLI::Range(0.3, 1.0))
      ->capture_default_str();
  map_cmd->add_option("--out", mp_out, "output image path")->required();
  mp_flags.attach(map_cmd);

  // fuse
  auto* fuse_cmd = app.add_subcommand("fuse", "fuse three quality maps");
  std::string fu_ref, fu_test, fu_out;
  std::vector<std::string> fu_metrics = {"ssim", "fsim", "mdsi"};
  std::vector<double> fu_alphas = {1.0, 1.0, 1.0};
  std::vector<double> fu_weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  MetricFlags fu_flags;
  fuse_cmd->add_option("--ref", fu_ref, "reference image")->required();
  fuse_cmd->add_option("--test", fu_test, "test image")->required();
  fuse_cmd->add_option("--metrics", fu_metrics, "three map metrics")
      ->delimiter(',')
      ->capture_default_str();
  fuse_cmd->add_option("--alphas", fu_alphas, "three intensity exponents")
      ->delimiter(',')
      ->capture_default_str();
  fuse_cmd->add_option("--weights", fu_weights, "three fusion weights")
      ->delimiter(',')
      ->capture_default_str();
  fuse_cmd->add_option("--out", fu_out, "output image path")->required();
  fu_flags.attach(fuse_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a manifest of scored pairs");
  std::string ev_metric, ev_manifest, ev_out;
  unsigned ev_jobs = 1;
  MetricFlags ev_flags;
  eval_cmd->add_option("--metric", ev_metric, "metric name")
      ->required()
      ->check(CLI::IsMember(metric_names));
  eval_cmd->add_option("--manifest", ev_manifest, "manifest csv")->required();
  eval_cmd->add_option("--out", ev_out, "report path (default: stdout)");
  eval_cmd->add_option("--jobs", ev_jobs, "worker count")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  ev_flags.attach(eval_cmd);

  // fit-pristine
  auto* fit_cmd = app.add_subcommand("fit-pristine", "fit a pristine NIQE model");
  std::vector<std::string> fp_images;
  std::string fp_out;
  MetricFlags fp_flags;
  fit_cmd->add_option("--out", fp_out, "model output path")->required();
  fit_cmd->add_option("images", fp_images, "corpus images")->required()->expected(-1);
  fp_flags.attach(fit_cmd);

  // distort
  auto* dist_cmd = app.add_subcommand("distort", "apply a synthetic distortion");
  std::string dk_kind, dk_in, dk_out;
  double dk_level = 0.0;
  std::uint64_t dk_seed = 0;
  dist_cmd->add_option("--kind", dk_kind, "distortion kind")
      ->required()
      ->check(CLI::IsMember({"agn", "gaussian_blur", "block_jpeg_like", "mean_shift"}));
  dist_cmd->add_option("--level", dk_level, "distortion level (> 0)")->required();
  dist_cmd->add_option("--seed", dk_seed, "rng seed")->required();
  dist_cmd->add_option("--in", dk_in, "input image")->required();
  dist_cmd->add_option("--out", dk_out, "output image")->required();

  // loss-eval
  auto* loss_cmd = app.add_subcommand("loss-eval", "evaluate loss terms on a sample batch");
  std::string le_batch;
  std::uint64_t le_seed = 0;
  MetricFlags le_flags;
  loss_cmd->add_option("--batch", le_batch, "json batch file")->required();
  auto* le_seed_opt = loss_cmd->add_option("--seed", le_seed, "rng seed for generated images");
  le_flags.attach(loss_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::cout << app.help();
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (score_cmd->parsed()) {
      const iqa::MetricParams params = sc_flags.build();
      const iqa::MetricKind kind = iqa::metric_kind_from_name(sc_metric);
      const iqa::ImageTensor ref = iqa::load_image(sc_ref);
      const iqa::ImageTensor test = iqa::load_image(sc_test);
      const double score = iqa::score_pair(kind, ref, test, params);
      json out = {{"metric", sc_metric}, {"ref", sc_ref}, {"score", score}, {"test", sc_test}};
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (map_cmd->parsed()) {
      const iqa::MetricParams params = mp_flags.build();
      const iqa::MapMetric metric = iqa::map_metric_from_name(mp_metric);
      const iqa::ImageTensor ref = iqa::load_image(mp_ref);
      const iqa::ImageTensor test = iqa::load_image(mp_test);
      const iqa::QualityMap qm =
          iqa::quality_map(metric, ref, test, mp_alpha, map_configs(params));
      iqa::save_image(mp_out, qm.plane);
      json side = {{"alpha", mp_alpha}, {"metric", mp_metric}, {"weights", nullptr}};
      write_text(mp_out + ".json", side.dump() + "\n");
      return 0;
    }
    if (fuse_cmd->parsed()) {
      if (fu_metrics.size() != 3 || fu_alphas.size() != 3 || fu_weights.size() != 3) {
        std::cerr << "error: fuse needs exactly three metrics, alphas, and weights\n";
        return 2;
      }
      const iqa::MetricParams params = fu_flags.build();
      const iqa::ImageTensor ref = iqa::load_image(fu_ref);
      const iqa::ImageTensor test = iqa::load_image(fu_test);
      std::vector<iqa::QualityMap> maps;
      for (int i = 0; i < 3; ++i)
        maps.push_back(iqa::quality_map(iqa::map_metric_from_name(fu_metrics[i]), ref, test,
                                        fu_alphas[i], map_configs(params)));
      iqa::FusionWeights w{fu_weights[0], fu_weights[1], fu_weights[2]};
      const iqa::ImagePlane fused = iqa::fuse_maps(maps[0], maps[1], maps[2], w);
      iqa::save_image(fu_out, fused);
      json side = {{"alpha", fu_alphas}, {"metric", fu_metrics}, {"weights", fu_weights}};
      write_text(fu_out + ".json", side.dump() + "\n");
      return 0;
    }
    if (eval_cmd->parsed()) {
      const iqa::MetricParams params = ev_flags.build();
      const iqa::MetricKind kind = iqa::metric_kind_from_name(ev_metric);
      const iqa::EvalManifest manifest = iqa::parse_manifest(ev_manifest);
      const iqa::EvalReport report = iqa::evaluate_manifest(manifest, kind, params, ev_jobs);
      // Provenance carries metric configuration only; execution details like
      // the worker count must not leak into the report, which is required to
      // be byte-identical across job counts.
      json cfg = ev_flags.provenance(params);
      cfg["metric"] = ev_metric;
      const std::string text = iqa::format_report(report, cfg.dump());
      if (ev_out.empty())
        std::cout << text;
      else
        write_text(ev_out, text);
      return 0;
    }
    if (fit_cmd->parsed()) {
      const iqa::MetricParams params = fp_flags.build();
      std::vector<iqa::ImagePlane> corpus;
      for (const std::string& path : fp_images)
        corpus.push_back(iqa::to_grayscale(iqa::load_image(path)));
      const iqa::MvgModel model = iqa::fit_pristine(corpus, params.niqe);
      iqa::save_mvg_model(fp_out, model);
      json out = {{"dim", model.dim()},
                  {"images", corpus.size()},
                  {"model", fp_out}};
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (dist_cmd->parsed()) {
      const iqa::ImageTensor img = iqa::load_image(dk_in);
      const iqa::ImageTensor out =
          iqa::synth_distort(img, iqa::distort_kind_from_name(dk_kind), dk_level, dk_seed);
      iqa::save_image(dk_out, out);
      return 0;
    }
    if (loss_cmd->parsed())
      return run_loss_eval(le_batch, le_seed_opt->count() > 0, le_seed, le_flags);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const iqa::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const iqa::EstimationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const iqa::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const iqa::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const iqa::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
}
