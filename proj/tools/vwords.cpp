// vwords: command-line front end for the visual-words lip reader.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "vwords/vwords.hpp"

namespace fs = std::filesystem;
using namespace vwords;

namespace {

struct Common {
  std::string config_path;

  Config config() const { return config_path.empty() ? Config{} : read_config(config_path); }
};

FeatureWeights weights_of(const Config& c) { return parse_weights_profile(c.weights); }

std::string annotations_for(const std::string& clip, const std::string& given) {
  return given.empty() ? (fs::path(clip) / "annotations.csv").string() : given;
}

std::string signature_name(const FeatureMatrix& m, std::size_t index) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%03zu_%s_%s_s%d_r%d.csv", index, m.label.c_str(), m.speaker.c_str(), m.session,
                m.repetition);
  return buf;
}

void write_signature_dir(const std::string& dir, const std::vector<FeatureMatrix>& sigs) {
  fs::create_directories(dir);
  std::string manifest = "file,label,speaker,session,repetition,group\n";
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    const FeatureMatrix& m = sigs[i];
    const std::string name = signature_name(m, i);
    write_features((fs::path(dir) / name).string(), m);
    manifest += name + "," + m.label + "," + m.speaker + "," + std::to_string(m.session) + "," +
                std::to_string(m.repetition) + "," + m.group + "\n";
  }
  text::write_file((fs::path(dir) / "manifest.csv").string(), manifest);
}

std::vector<std::size_t> parse_k_list(const std::string& s) {
  std::vector<std::size_t> ks;
  for (const std::string& part : text::split(s, ',')) ks.push_back(text::parse_number<std::size_t>(part, "--k: "));
  if (ks.empty()) throw Error("--k: empty list");
  return ks;
}

std::vector<double> read_distances(const std::string& path) {
  std::vector<double> out;
  const auto ls = text::lines(text::read_file(path));
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const auto l = text::trim(ls[i]);
    if (l.empty() || l.front() == '#') continue;
    out.push_back(text::parse_number<double>(l, text::where(path, i + 1)));
  }
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) return default_threshold_grid();
  const auto p = text::split(spec, ':');
  if (p.size() != 3) throw Error("--grid: expected lo:hi:step");
  const double lo = text::parse_number<double>(p[0], "--grid: "), hi = text::parse_number<double>(p[1], "--grid: "),
               step = text::parse_number<double>(p[2], "--grid: ");
  if (!(step > 0.0) || hi < lo) throw Error("--grid: need lo <= hi and step > 0");
  std::vector<double> g;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) g.push_back(lo + i * step);
  return g;
}

const char* protocol_name(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::sd_loo: return "sd";
    case ProtocolKind::si_loso: return "si";
    case ProtocolKind::sd2_session: return "sd2";
  }
  return "?";
}

void print_report(const EvalReport& r) {
  std::printf("protocol %s, %zu folds%s\n", protocol_name(r.kind), r.folds,
              r.oracle_groups ? ", group rule (oracle-assisted: the test word's group is given)" : "");
  for (const KResult& k : r.per_k) {
    std::printf("k=%zu  WRR %.2f%%  (%zu/%zu)\n", k.k, k.wrr, k.correct, k.total);
    for (const auto& [s, w] : k.subject_wrr) std::printf("  subject %-12s %.2f%%\n", s.c_str(), w);
  }
  const KResult& best = r.best();
  std::printf("confusion (k=%zu), rows = actual\n", best.k);
  std::vector<std::string> labels;
  for (const auto& [a, row] : best.confusion) {
    if (std::find(labels.begin(), labels.end(), a) == labels.end()) labels.push_back(a);
    for (const auto& [p, n] : row)
      if (std::find(labels.begin(), labels.end(), p) == labels.end()) labels.push_back(p);
  }
  std::sort(labels.begin(), labels.end());
  std::printf("%-12s", "");
  for (const auto& l : labels) std::printf(" %8.8s", l.c_str());
  std::printf("\n");
  for (const auto& a : labels) {
    std::printf("%-12.12s", a.c_str());
    const auto row = best.confusion.find(a);
    for (const auto& p : labels) {
      std::size_t n = 0;
      if (row != best.confusion.end())
        if (auto it = row->second.find(p); it != row->second.end()) n = it->second;
      std::printf(" %8zu", n);
    }
    std::printf("\n");
  }
}

int run_synth(const std::string& out, std::uint64_t seed, int repetitions, int speakers, int sessions, int faces,
              int scenes) {
  const fs::path root(out);
  fs::create_directories(root / "faces");
  std::string truth = "file,x,y,width,height\n";
  for (int i = 0; i < faces; ++i) {
    const auto pf = synth::planted_face(seed + static_cast<std::uint64_t>(i));
    char name[32];
    std::snprintf(name, sizeof name, "face_%04d.ppm", i);
    write_ppm((root / "faces" / name).string(), pf.frame);
    truth += std::string(name) + "," + std::to_string(pf.truth.x) + "," + std::to_string(pf.truth.y) + "," +
             std::to_string(pf.truth.width) + "," + std::to_string(pf.truth.height) + "\n";
  }
  text::write_file((root / "faces" / "truth.csv").string(), truth);

  fs::create_directories(root / "lips");
  for (int i = 0; i < scenes; ++i) {
    const auto s = synth::lip_scene(seed + 10000 + static_cast<std::uint64_t>(i), static_cast<std::size_t>(i % 4));
    char name[32];
    std::snprintf(name, sizeof name, "scene_%04d", i);
    write_ppm((root / "lips" / (std::string(name) + ".ppm")).string(), s.roi);
    write_pbm((root / "lips" / (std::string(name) + ".pbm")).string(), s.truth);
  }

  for (int sp = 1; sp <= speakers; ++sp)
    for (int se = 1; se <= sessions; ++se) {
      const std::string speaker = "s" + std::to_string(sp);
      const auto clip = synth::talking_clip(seed + 100 * static_cast<std::uint64_t>(sp) + static_cast<std::uint64_t>(se),
                                            repetitions, speaker, se);
      const fs::path dir = root / "clips" / (speaker + "_session" + std::to_string(se));
      save_clip(dir.string(), clip.frames);
      text::write_file((dir / "annotations.csv").string(), encode_annotations(clip.annotations));
    }
  std::printf("wrote %d faces, %d lip scenes, %d clips to %s\n", faces, scenes, speakers * sessions, out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vwords - visual words lip reading"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-c,--config", common.config_path, "key=value configuration file");

  std::string clip, annotations, out, store, input, profile, watchlist, protocol = "sd", k_list, genuine, impostor,
                                                                   grid, overlay;
  std::vector<std::string> inputs;
  bool group_rule = false;
  int tries = 0, repetitions = 5, speakers = 1, sessions = 1, n_faces = 100, n_scenes = 50;
  std::uint64_t seed = 1;
  double omega = 0.0;

  auto* faces = app.add_subcommand("faces", "localize the face in every frame of a clip");
  faces->add_option("clip", clip, "frame directory")->required();
  faces->add_option("--overlay", overlay, "write frames with the face box drawn into this directory");

  auto* lips = app.add_subcommand("lips", "segment the lips in every frame of a clip");
  lips->add_option("clip", clip, "frame directory")->required();
  lips->add_option("-o,--out", out, "directory for PBM masks (region coordinates)")->required();

  auto* features = app.add_subcommand("features", "extract one signature per annotated word");
  features->add_option("clip", clip, "frame directory")->required();
  features->add_option("-a,--annotations", annotations, "annotation file (default: <clip>/annotations.csv)");
  features->add_option("-o,--out", out, "output signature directory")->required();

  auto* train = app.add_subcommand("train", "merge signature directories into a training store");
  train->add_option("inputs", inputs, "signature directories")->required();
  train->add_option("-o,--out", out, "store directory")->required();

  auto* classify = app.add_subcommand("classify", "recognize the word of a signature");
  classify->add_option("--store", store, "training store")->required();
  classify->add_option("input", input, "feature file")->required();

  auto* eval = app.add_subcommand("eval", "cross-validate a store");
  eval->add_option("--store", store, "store")->required();
  eval->add_option("--protocol", protocol, "sd | si | sd2")->check(CLI::IsMember({"sd", "si", "sd2"}));
  eval->add_flag("--group-rule", group_rule, "discard predictions outside the test word's group");
  eval->add_option("--k", k_list, "comma-separated k values (default 1..5)");

  auto* identify = app.add_subcommand("identify", "identify the speaker of a signature");
  identify->add_option("--store", store, "gallery store")->required();
  identify->add_option("input", input, "feature file")->required();

  auto* verify = app.add_subcommand("verify", "visual password check");
  verify->add_option("--profile", profile, "profile directory")->required();
  verify->add_option("--tries", tries, "failed attempts so far");
  verify->add_option("input", input, "feature file")->required();

  auto* spot = app.add_subcommand("spot", "check a signature against a watch list");
  spot->add_option("--watchlist", watchlist, "watch-list directory")->required();
  spot->add_option("input", input, "feature file")->required();

  auto* sweep = app.add_subcommand("sweep", "FAR/FRR threshold curve");
  sweep->add_option("--store", store, "store: same-label pairs are genuine, others impostor");
  sweep->add_option("--genuine", genuine, "file of genuine distances");
  sweep->add_option("--impostor", impostor, "file of impostor distances");
  sweep->add_option("--grid", grid, "lo:hi:step (default 1:5:0.1)");
  sweep->add_option("--omega", omega, "weight of FAR in the weighted error");
  sweep->add_option("-o,--out", out, "curve file (threshold,frr,far)");

  auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic fixture corpus");
  synth_cmd->add_option("-o,--out", out, "output directory")->required();
  synth_cmd->add_option("--seed", seed, "random seed");
  synth_cmd->add_option("--repetitions", repetitions, "repetitions of each word per clip");
  synth_cmd->add_option("--speakers", speakers, "number of speakers");
  synth_cmd->add_option("--sessions", sessions, "sessions per speaker (1 or 2)");
  synth_cmd->add_option("--faces", n_faces, "planted-face frames");
  synth_cmd->add_option("--scenes", n_scenes, "lip scenes");

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = common.config();

    if (*faces) {
      const FrameSequence frames = load_clip(clip);
      if (!overlay.empty()) fs::create_directories(overlay);
      std::optional<FaceBox> prev;
      std::printf("frame,x,y,width,height\n");
      for (std::size_t i = 0; i < frames.size(); ++i) {
        const RgbImage frame = cfg.deinterlace ? deinterlace_blend(frames[i]) : frames[i];
        const FaceBox box = prev && cfg.track_margin >= 0 ? track_face(*prev, frame, cfg.track_margin, cfg.face)
                                                          : localize_face(frame, cfg.face);
        prev = box;
        std::printf("%zu,%d,%d,%d,%d\n", i, box.x, box.y, box.width, box.height);
        if (!overlay.empty()) {
          BinaryImage outline(box.width, box.height, 0);
          for (int x = 0; x < box.width; ++x) outline.at(x, 0) = outline.at(x, box.height - 1) = 1;
          for (int y = 0; y < box.height; ++y) outline.at(0, y) = outline.at(box.width - 1, y) = 1;
          char name[32];
          std::snprintf(name, sizeof name, "face_%05zu.ppm", i);
          write_ppm((fs::path(overlay) / name).string(), vwords::overlay(frame, outline, box.x, box.y));
        }
      }
    } else if (*lips) {
      const FrameSequence frames = load_clip(clip);
      std::vector<int> all(frames.size());
      std::iota(all.begin(), all.end(), 0);
      fs::create_directories(out);
      std::printf("frame,roi_x,roi_y,mouth_x,mouth_y,mouth_width,mouth_height\n");
      for (const auto& [i, r] : process_frames(frames, all, cfg)) {
        char name[32];
        std::snprintf(name, sizeof name, "mask_%05d.pbm", i);
        write_pbm((fs::path(out) / name).string(), r.mask);
        if (r.mouth)
          std::printf("%d,%d,%d,%d,%d,%d,%d\n", i, r.roi.origin_x, r.roi.origin_y, r.mouth->box.x, r.mouth->box.y,
                      r.mouth->box.width, r.mouth->box.height);
        else
          std::printf("%d,%d,%d,,,,\n", i, r.roi.origin_x, r.roi.origin_y);
      }
    } else if (*features) {
      const FrameSequence frames = load_clip(clip);
      const auto words = read_annotations(annotations_for(clip, annotations));
      const auto sigs = run_pipeline(frames, words, cfg);
      write_signature_dir(out, sigs);
      std::printf("wrote %zu signatures to %s\n", sigs.size(), out.c_str());
    } else if (*train) {
      TrainingSet all;
      for (const std::string& dir : inputs) {
        TrainingSet part = load_store(dir);
        all.insert(all.end(), part.begin(), part.end());
      }
      if (all.empty()) throw Error("no signatures found in the inputs");
      write_signature_dir(out, all);
      std::printf("store %s: %zu signatures\n", out.c_str(), all.size());
    } else if (*classify) {
      const TrainingSet set = load_store(store);
      const FeatureMatrix test = read_features(input);
      const auto ranked = rank_matches(test, set, weights_of(cfg), cfg.mode);
      const std::string label = cfg.decision == Decision::knn ? knn_decide(ranked, cfg.k) : wknn_decide(ranked, cfg.k);
      std::printf("%s\n", label.c_str());
      for (std::size_t i = 0; i < std::min<std::size_t>(5, ranked.size()); ++i)
        std::printf("  #%zu %-12s %.6f\n", i + 1, ranked[i].label.c_str(), ranked[i].fused);
    } else if (*eval) {
      Protocol p;
      p.kind = protocol == "sd" ? ProtocolKind::sd_loo : protocol == "si" ? ProtocolKind::si_loso : ProtocolKind::sd2_session;
      if (!k_list.empty()) p.k_range = parse_k_list(k_list);
      p.mode = cfg.mode;
      p.decision = cfg.decision;
      p.group_rule = group_rule;
      p.weights = cfg.weights == "sd" && p.kind == ProtocolKind::si_loso ? FeatureWeights::speaker_independent()
                                                                          : weights_of(cfg);
      print_report(run_protocol(load_store(store), p));
    } else if (*identify) {
      const std::string who = identify_speaker(read_features(input), load_store(store), cfg.k, weights_of(cfg), cfg.mode);
      std::printf("%s\n", who.c_str());
    } else if (*verify) {
      double d = 0.0;
      const Verdict v = verify_password(read_features(input), load_profile(profile), tries, &d);
      std::printf("%s distance=%.6f\n", to_string(v), d);
    } else if (*spot) {
      const SpotResult r = spot_security_word(read_features(input), load_watchlist(watchlist));
      if (r.alarm) std::printf("alarm %s distance=%.6f\n", r.label.c_str(), r.distance);
      else std::printf("clear nearest=%s distance=%.6f\n", r.label.c_str(), r.distance);
    } else if (*sweep) {
      std::vector<double> gen, imp;
      if (!store.empty()) {
        const TrainingSet set = load_store(store);
        const FeatureWeights w = weights_of(cfg);
        for (std::size_t i = 0; i < set.size(); ++i)
          for (std::size_t j = i + 1; j < set.size(); ++j) {
            if (set[i].speaker != set[j].speaker) continue;
            const double d = fuse(feature_distances(set[i], set[j], cfg.mode), w);
            (set[i].label == set[j].label ? gen : imp).push_back(d);
          }
      } else {
        if (genuine.empty() || impostor.empty()) throw Error("sweep needs --store or both --genuine and --impostor");
        gen = read_distances(genuine);
        imp = read_distances(impostor);
      }
      const std::vector<double> g = parse_grid(grid);
      const ThresholdCurve c = far_frr_sweep(gen, imp, g, omega > 0.0 ? std::optional<double>(omega) : std::nullopt);
      const std::string curve = encode_curve(c);
      if (out.empty()) std::fputs(curve.c_str(), stdout);
      else text::write_file(out, curve);
      std::printf("best threshold %.6f  FRR %.4f  FAR %.4f\n", c.best_threshold(), c.frr[c.best_index],
                  c.far[c.best_index]);
    } else if (*synth_cmd) {
      return run_synth(out, seed, repetitions, speakers, sessions, n_faces, n_scenes);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
