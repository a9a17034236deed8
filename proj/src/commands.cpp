// Copyright 2026 The topotex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "topotex/commands.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "topotex/error.hpp"
#include "topotex/interpret.hpp"
#include "topotex/svg.hpp"

namespace topotex::commands {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string file_safe(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

Eigen::MatrixXd rows_of(const Dataset& ds, const std::vector<int>& rows) {
  const auto dim = static_cast<Eigen::Index>(ds.config.shape().dimension());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& v = ds.items[static_cast<std::size_t>(rows[r])].embedding.values;
    m.row(static_cast<Eigen::Index>(r)) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), dim);
  }
  return m;
}

std::vector<int> labels_of(const Dataset& ds, const std::vector<int>& rows, const std::string& pos) {
  std::vector<int> y;
  for (int r : rows) y.push_back(ds.items[static_cast<std::size_t>(r)].label == pos ? 1 : -1);
  return y;
}

void require_class(const Dataset& ds, const std::string& cls) {
  for (const auto& a : ds.items) {
    if (a.label == cls) return;
  }
  throw DomainError("no embeddings for class '" + cls + "'");
}

struct StoredSplit {
  std::vector<int> train;
  std::vector<int> test;
};

StoredSplit load_split(const fs::path& dir) {
  try {
    const auto j = nlohmann::json::parse(read_text(dir / "split.json"));
    return {j.at("train").get<std::vector<int>>(), j.at("test").get<std::vector<int>>()};
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed split.json: " + std::string(e.what()));
  }
}

PairModel load_model(const fs::path& dir, const std::string& pos, const std::string& neg) {
  if (!fs::exists(dir / "model.json")) {
    throw UsageError("pair " + pos + ":" + neg + " has not been trained; run `topotex train --pair " + pos + ":" +
                     neg + "` first");
  }
  return model_from_json(read_text(dir / "model.json"));
}

Evaluation write_evaluation(const fs::path& dir, const Dataset& ds, const PairModel& model, const std::vector<int>& test,
                            int n_train, bool reproducible) {
  const Eigen::MatrixXd projected = project_rows(model.pca, rows_of(ds, test));
  const std::vector<int> y = labels_of(ds, test, model.svm.class_pos);
  const Evaluation ev = evaluate(model.svm, projected, y);

  std::string csv = "id,label,predicted,signed_distance\n";
  char buf[64];
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& a = ds.items[static_cast<std::size_t>(test[i])];
    labels.push_back(a.label);
    std::snprintf(buf, sizeof buf, "%.17g", ev.signed_distances[i]);
    csv += std::to_string(a.id) + "," + a.label + "," +
           (ev.predicted[i] == 1 ? model.svm.class_pos : model.svm.class_neg) + "," + buf + "\n";
  }
  write_text(dir / "evaluation.csv", csv);

  ojson j;
  j["classes"] = {model.svm.class_pos, model.svm.class_neg};
  j["accuracy"] = ev.accuracy;
  j["accuracy_percent"] = format_percent(ev.accuracy);
  j["total"] = ev.total;
  j["correct"] = ev.correct;
  j["confusion"] = {{"actual_" + model.svm.class_pos, {{"predicted_" + model.svm.class_pos, ev.confusion[0][0]},
                                                      {"predicted_" + model.svm.class_neg, ev.confusion[0][1]}}},
                    {"actual_" + model.svm.class_neg, {{"predicted_" + model.svm.class_pos, ev.confusion[1][0]},
                                                      {"predicted_" + model.svm.class_neg, ev.confusion[1][1]}}}};
  j["n_train"] = n_train;
  j["n_test"] = ev.total;
  j["explained_variance_ratio"] =
      std::vector<double>(model.pca.explained_variance_ratio.data(),
                          model.pca.explained_variance_ratio.data() + model.pca.explained_variance_ratio.size());
  write_text(dir / "evaluation.json", j.dump(2) + "\n");

  const auto views = svg::canonical_views();
  for (std::size_t v = 0; v < views.size(); ++v) {
    svg::Style style{reproducible, model.svm.class_pos + " vs " + model.svm.class_neg +
                                        " test data (accuracy " + format_percent(ev.accuracy) + ")"};
    write_text(dir / ("scatter_view" + std::to_string(v + 1) + ".svg"),
               svg::scatter3d(projected, labels, &model.svm, views[v], style));
  }
  return ev;
}

}  // namespace

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

PersistenceRun persistence(const fs::path& image, const fs::path& out_dir, bool plot, bool reproducible) {
  const GrayImage img = load_image(image);
  PersistenceRun run;
  run.barcode = superlevel_barcode(img);
  ensure_dir(out_dir);
  const std::string stem = image.stem().string();
  run.written.push_back(out_dir / (stem + ".barcode.json"));
  write_text(run.written.back(), barcode_to_json(run.barcode));
  if (plot) {
    run.written.push_back(out_dir / (stem + ".barcode.svg"));
    write_text(run.written.back(), svg::barcode(run.barcode, {reproducible, "Persistence barcode: " + stem}));
    run.written.push_back(out_dir / (stem + ".diagram.svg"));
    write_text(run.written.back(), svg::diagram(run.barcode, {reproducible, "Persistence diagram: " + stem}));
  }
  return run;
}

IngestReport embed(const fs::path& manifest, PipelineConfig cfg, const fs::path& out_dir, int jobs) {
  ensure_dir(out_dir);
  if (cfg.cache_dir.empty()) cfg.cache_dir = out_dir / "cache";
  IngestResult result = ingest(manifest, cfg, jobs);

  Dataset ds;
  ds.items = std::move(result.annotations);
  ds.config = cfg;
  ds.image_root = fs::absolute(manifest).parent_path();
  save_dataset(out_dir, ds);

  ojson j;
  const auto& r = result.report;
  j["total"] = r.total;
  j["processed"] = r.processed;
  j["skipped"] = r.skipped;
  j["failed"] = r.failed;
  j["cache_hits"] = r.cache_hits;
  j["persistence_computations"] = r.persistence_computations;
  auto issues = [](const std::vector<IngestIssue>& list) {
    ojson a = ojson::array();
    for (const auto& i : list) a.push_back({{"record", i.record}, {"image", i.image_id}, {"message", i.message}});
    return a;
  };
  j["warnings"] = issues(r.warnings);
  j["errors"] = issues(r.errors);
  write_text(out_dir / "ingest_report.json", j.dump(2) + "\n");
  return result.report;
}

fs::path pair_dir(const fs::path& out_dir, const std::string& pos, const std::string& neg) {
  return out_dir / ("pair_" + file_safe(pos) + "_" + file_safe(neg));
}

PairRun train(const fs::path& out_dir, const PipelineConfig& cfg, const std::string& pos, const std::string& neg,
              bool reproducible) {
  if (pos == neg) throw UsageError("a pair needs two different classes");
  const Dataset ds = load_dataset(out_dir);
  require_class(ds, pos);
  require_class(ds, neg);

  SplitSpec spec{cfg.train_per_class, cfg.test_per_class, mix64(cfg.seed ^ fnv1a(pos + ":" + neg))};
  const Split sp = split(ds.items, {pos, neg}, spec);

  PairModel model;
  model.pca = fit_pca(rows_of(ds, sp.train), 3);
  model.svm = fit_svm(project_rows(model.pca, rows_of(ds, sp.train)), labels_of(ds, sp.train, pos), cfg.svm_c, pos, neg);

  PairRun run;
  run.class_pos = pos;
  run.class_neg = neg;
  run.dir = pair_dir(out_dir, pos, neg);
  ensure_dir(run.dir);
  write_text(run.dir / "model.json", model_to_json(model));
  ojson sj;
  sj["classes"] = {pos, neg};
  sj["seed"] = spec.seed;
  sj["train"] = sp.train;
  sj["test"] = sp.test;
  write_text(run.dir / "split.json", sj.dump(1) + "\n");

  run.n_train = static_cast<int>(sp.train.size());
  run.n_test = static_cast<int>(sp.test.size());
  run.explained_variance_ratio = model.pca.explained_variance_ratio;
  run.evaluation = write_evaluation(run.dir, ds, model, sp.test, run.n_train, reproducible);
  return run;
}

PairRun evaluate(const fs::path& out_dir, const std::string& pos, const std::string& neg, bool reproducible) {
  PairRun run;
  run.class_pos = pos;
  run.class_neg = neg;
  run.dir = pair_dir(out_dir, pos, neg);
  const PairModel model = load_model(run.dir, pos, neg);
  const Dataset ds = load_dataset(out_dir);
  const StoredSplit sp = load_split(run.dir);
  for (int r : sp.test) {
    if (r < 0 || static_cast<std::size_t>(r) >= ds.items.size()) throw IoError("split.json refers to a missing row");
  }
  run.n_train = static_cast<int>(sp.train.size());
  run.n_test = static_cast<int>(sp.test.size());
  run.explained_variance_ratio = model.pca.explained_variance_ratio;
  run.evaluation = write_evaluation(run.dir, ds, model, sp.test, run.n_train, reproducible);
  return run;
}

InterpretRun interpret(const fs::path& out_dir, const std::string& pos, const std::string& neg, bool reproducible) {
  InterpretRun run;
  run.dir = pair_dir(out_dir, pos, neg);
  const PairModel model = load_model(run.dir, pos, neg);
  const Dataset ds = load_dataset(out_dir);
  const StoredSplit sp = load_split(run.dir);
  std::vector<int> rows = sp.train;
  rows.insert(rows.end(), sp.test.begin(), sp.test.end());
  for (int r : rows) {
    if (r < 0 || static_cast<std::size_t>(r) >= ds.items.size()) throw IoError("split.json refers to a missing row");
  }
  const EmbeddingShape shape = ds.config.shape();
  const Eigen::MatrixXd data = rows_of(ds, rows);
  const std::vector<int> y = labels_of(ds, rows, pos);
  const LiftedPlane plane = lift_plane(model.pca, model.svm);
  const ExtremePair extreme = extreme_examples(model.svm, project_rows(model.pca, data), y);

  const fs::path dir = run.dir / "interpret";
  ensure_dir(dir);
  ojson j;
  j["classes"] = {pos, neg};
  j["centroid_data"] = "train+test annotations of the pair";
  j["n_points"] = rows.size();
  j["lifted_normal_gain"] = plane.gain;
  j["virtual"] = ojson::array();
  j["extreme"] = ojson::array();
  run.side_checks_passed = true;

  for (const std::string& side : {pos, neg}) {
    const bool is_pos = side == pos;
    const int row = rows[static_cast<std::size_t>(is_pos ? extreme.pos_index : extreme.neg_index)];
    const auto& a = ds.items[static_cast<std::size_t>(row)];
    const fs::path img_path = fs::path(a.provenance.image_id).is_absolute()
                                  ? fs::path(a.provenance.image_id)
                                  : ds.image_root / a.provenance.image_id;
    const GrayImage region = crop(load_image(img_path), a.provenance.bbox);
    const SampledLandscape real = vector_to_landscape(a.embedding.values, shape, false);
    const VirtualPoint vp = virtual_landscape(model.pca, model.svm, data, side, shape);
    const bool on_side = is_pos ? vp.decision > 0 : vp.decision < 0;
    run.side_checks_passed = run.side_checks_passed && on_side;

    const std::string tag = file_safe(side);
    const fs::path p_img = dir / ("extreme_" + tag + "_image.svg");
    const fs::path p_real = dir / ("extreme_" + tag + "_landscape.svg");
    const fs::path p_virtual = dir / ("virtual_" + tag + "_landscape.svg");
    write_text(p_img, svg::image(region, {reproducible, "Extreme " + side + " annotation #" + std::to_string(a.id)}));
    write_text(p_real, svg::landscape(real, {reproducible, "Extreme " + side + " landscape"}));
    write_text(p_virtual, svg::landscape(vp.curves, {reproducible, "Virtual " + side + " landscape"}));
    run.panels.insert(run.panels.end(), {p_img, p_real, p_virtual});

    const double distance = is_pos ? extreme.pos_distance : extreme.neg_distance;
    j["extreme"].push_back({{"side", side},
                            {"id", a.id},
                            {"image", a.provenance.image_id},
                            {"bbox", {a.provenance.bbox.x0, a.provenance.bbox.y0, a.provenance.bbox.x1, a.provenance.bbox.y1}},
                            {"signed_distance", distance}});
    ojson v;
    v["side"] = side;
    v["offset"] = vp.offset;
    v["decision"] = vp.decision;
    v["on_declared_side"] = on_side;
    v["satisfies_landscape_axioms"] = satisfies_landscape_axioms(vp.curves);
    v["vector"] = std::vector<double>(vp.vector.data(), vp.vector.data() + vp.vector.size());
    j["virtual"].push_back(std::move(v));
  }
  j["panels"] = ojson::array();
  for (const auto& p : run.panels) j["panels"].push_back(p.filename().string());
  write_text(dir / "interpret.json", j.dump(1) + "\n");
  return run;
}

}  // namespace topotex::commands
