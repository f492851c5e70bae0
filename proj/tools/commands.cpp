/*
 * vpe: a toolkit for template-based face verification pipelines
 * File: tools/commands.cpp
 *
 * Copyright 2026 The vpe authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vpe/assoc/engine.hpp"
#include "vpe/assoc/linking.hpp"
#include "vpe/core/csv.hpp"
#include "vpe/core/error.hpp"
#include "vpe/core/io.hpp"
#include "vpe/embed/train.hpp"
#include "vpe/embed/vector_ops.hpp"
#include "vpe/eval/metrics.hpp"
#include "vpe/eval/protocol.hpp"
#include "vpe/landmarks/cascade.hpp"
#include "vpe/pooling/pooling.hpp"
#include "vpe/synth/clusters.hpp"
#include "vpe/synth/scenario.hpp"
#include "vpe/synth/shapes.hpp"

namespace vpe::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path prepare_out_dir(const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
}

// Every command records its resolved configuration; reruns with the same
// manifest arguments reproduce the outputs byte for byte.
void write_manifest(const fs::path& dir, const std::string& command, const json& arguments,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["arguments"] = arguments;
    manifest["outputs"] = outputs;
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out) raise(errc::io, "cannot write manifest in " + dir.string());
    out << manifest.dump(2) << '\n';
}

std::vector<std::string> read_id_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io, "cannot open " + path.string());
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) ids.push_back(line);
    }
    return ids;
}

struct PooledFile {
    std::vector<std::string> ids;
    std::map<std::string, std::string> subject_of;
    eval::PooledVectors vectors;
};

// Pooled template files keep the template id in the media_id slot; the
// optional sidecar lists templates that pooled to MISSING.
PooledFile load_pooled(const fs::path& path) {
    PooledFile out;
    const EmbeddingDataset ds = load_embeddings(path);
    for (const auto& e : ds.items) {
        out.ids.push_back(e.media_id);
        out.subject_of[e.media_id] = e.subject_id;
        out.vectors[e.media_id] = e.values;
    }
    const fs::path sidecar = path.string() + ".missing.txt";
    if (fs::exists(sidecar)) {
        for (const auto& id : read_id_lines(sidecar)) {
            out.ids.push_back(id);
            out.vectors[id] = std::nullopt;
        }
    }
    return out;
}

std::vector<Template> select_templates(const std::vector<Template>& all,
                                       const std::vector<std::string>& ids) {
    std::map<std::string, const Template*> by_id;
    for (const auto& t : all) by_id[t.template_id] = &t;
    std::vector<Template> out;
    for (const auto& id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            raise(errc::unknown_id, "protocol references unknown template " + id);
        }
        out.push_back(*it->second);
    }
    return out;
}

void write_metric_csv(const fs::path& path, const std::map<std::string, double>& metrics) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) raise(errc::io, "cannot write " + path.string());
    out << "metric,value\n";
    for (const auto& [name, value] : metrics) {
        out << name << ',' << csv::format_double(value) << '\n';
    }
}

// ---- train ----

struct TrainArgs {
    std::string embeddings;
    std::string objective = "tse";
    TrainConfig cfg;
    std::string out_dir = "out";
};

int cmd_train(const TrainArgs& args) {
    const fs::path dir = prepare_out_dir(args.out_dir);
    const EmbeddingDataset pool = load_embeddings(args.embeddings);
    const TripletObjective objective =
        args.objective == "tde" ? TripletObjective::distance : TripletObjective::similarity;
    const embed::TrainResult result = embed::train(pool, args.cfg, objective);
    write_projection(dir / "W.vpw", result.matrix);
    embed::write_train_log(dir / "train_log.csv", result.log);
    write_manifest(dir, "train",
                   json{{"embeddings", args.embeddings},
                        {"objective", args.objective},
                        {"dim", args.cfg.output_dim},
                        {"margin", args.cfg.margin},
                        {"lr", args.cfg.learning_rate},
                        {"negatives", args.cfg.negatives_pool},
                        {"iterations", args.cfg.iterations},
                        {"seed", args.cfg.seed}},
                   {"W.vpw", "train_log.csv"});
    std::cout << "trained " << args.objective << " projection " << result.matrix.rows() << "x"
              << result.matrix.cols() << " -> " << (dir / "W.vpw").string() << '\n';
    return 0;
}

// ---- project ----

int cmd_project(const std::string& embeddings, const std::string& matrix, bool renormalize,
                const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const EmbeddingDataset in = load_embeddings(embeddings);
    const EmbeddingMatrix w = load_projection(matrix);
    EmbeddingDataset out;
    out.dim = w.rows();
    for (const auto& e : in.items) {
        Embedding projected = e;
        projected.values = embed::project(w, e.values);
        if (renormalize) projected.values = embed::l2_normalize(projected.values);
        out.items.push_back(std::move(projected));
    }
    write_embeddings(dir / "projected.vpe", out);
    write_manifest(dir, "project",
                   json{{"embeddings", embeddings},
                        {"matrix", matrix},
                        {"renormalize", renormalize}},
                   {"projected.vpe"});
    return 0;
}

// ---- pool ----

int cmd_pool(const std::string& embeddings, const std::string& templates,
             const std::string& mode, const std::string& inject_missing,
             const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const EmbeddingDataset ds = load_embeddings(embeddings);
    std::vector<Template> all = load_template_manifest(templates, ds);
    if (!inject_missing.empty()) {
        const auto ids = read_id_lines(inject_missing);
        for (auto& t : all) {
            if (std::find(ids.begin(), ids.end(), t.template_id) != ids.end()) {
                t.missing = true;
                t.members.clear();
            }
        }
    }
    const pooling::PoolingMode pooling_mode =
        mode == "media" ? pooling::PoolingMode::media : pooling::PoolingMode::average;

    EmbeddingDataset pooled;
    pooled.dim = ds.dim;
    std::vector<std::string> missing;
    for (const auto& t : all) {
        const auto v = pooling::pool(t, ds, pooling_mode);
        if (!v) {
            missing.push_back(t.template_id);
            continue;
        }
        Embedding e;
        e.values = *v;
        e.subject_id = t.subject_id;
        e.media_id = t.template_id;
        e.source_kind = SourceKind::image;
        pooled.items.push_back(std::move(e));
    }
    write_embeddings(dir / "pooled.vpe", pooled);
    std::ofstream sidecar(dir / "pooled.vpe.missing.txt", std::ios::trunc);
    for (const auto& id : missing) sidecar << id << '\n';
    write_manifest(dir, "pool",
                   json{{"embeddings", embeddings},
                        {"templates", templates},
                        {"mode", mode},
                        {"inject_missing", inject_missing}},
                   {"pooled.vpe", "pooled.vpe.missing.txt"});
    std::cout << "pooled " << pooled.items.size() << " templates (" << missing.size()
              << " missing)\n";
    return 0;
}

// ---- score ----

int cmd_score(const std::string& gallery, const std::string& probe, const std::string& pairs,
              const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const PooledFile g = load_pooled(gallery);

    if (!pairs.empty()) {
        // Pair-list scoring over one pooled file (gallery doubles as the
        // template store).
        const auto rows = csv::read_rows(pairs);
        if (rows.empty() || rows.front().size() != 2 || rows.front()[0] != "template_id_a") {
            raise(errc::bad_format, pairs + ": expected pair list header");
        }
        std::vector<std::pair<std::string, std::string>> list;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            list.emplace_back(rows[i][0], rows[i][1]);
        }
        const auto scored = eval::score_pairs(list, g.subject_of, g.vectors);
        std::ofstream out(dir / "pairs_scored.csv", std::ios::trunc);
        out << "template_id_a,template_id_b,score,genuine\n";
        for (std::size_t i = 0; i < list.size(); ++i) {
            out << list[i].first << ',' << list[i].second << ',';
            if (scored[i].score) {
                out << csv::format_double(*scored[i].score);
            } else {
                out << "MISSING";
            }
            out << ',' << (scored[i].genuine ? 1 : 0) << '\n';
        }
        write_manifest(dir, "score", json{{"gallery", gallery}, {"pairs", pairs}},
                       {"pairs_scored.csv"});
        return 0;
    }

    const PooledFile p = load_pooled(probe);
    std::vector<Template> gallery_templates;
    std::vector<Template> probe_templates;
    for (const auto& id : g.ids) {
        gallery_templates.push_back(Template{id, g.subject_of.count(id) ? g.subject_of.at(id) : "",
                                             {}, !g.vectors.at(id).has_value()});
    }
    for (const auto& id : p.ids) {
        probe_templates.push_back(Template{id, p.subject_of.count(id) ? p.subject_of.at(id) : "",
                                           {}, !p.vectors.at(id).has_value()});
    }
    eval::PooledVectors pooled = g.vectors;
    pooled.insert(p.vectors.begin(), p.vectors.end());
    const SimilarityMatrix m =
        eval::build_similarity_matrix(gallery_templates, probe_templates, pooled);
    write_similarity_csv(dir / "similarity.csv", m);
    write_manifest(dir, "score", json{{"gallery", gallery}, {"probe", probe}},
                   {"similarity.csv"});
    return 0;
}

// ---- fuse ----

int cmd_fuse(const std::vector<std::string>& inputs, const std::vector<double>& weights,
             const std::string& out_dir) {
    if (inputs.size() < 2) {
        raise(errc::config, "fuse needs at least two similarity matrices");
    }
    const fs::path dir = prepare_out_dir(out_dir);
    std::vector<SimilarityMatrix> matrices;
    for (const auto& path : inputs) matrices.push_back(load_similarity_csv(path));
    const SimilarityMatrix fused = pooling::fuse_scores(matrices, weights);
    write_similarity_csv(dir / "fused.csv", fused);
    write_manifest(dir, "fuse", json{{"inputs", inputs}, {"weights", weights}}, {"fused.csv"});
    return 0;
}

// ---- associate ----

struct AssociateArgs {
    std::string detections;
    std::string ground_truth;
    assoc::AssocConfig cfg;
    int appearance_dim = 16;
    /// Frames to run; 0 derives the span from the last detection row.
    long frames = 0;
    std::string out_dir = "out";
};

int cmd_associate(const AssociateArgs& args) {
    const fs::path dir = prepare_out_dir(args.out_dir);
    const auto rows = assoc::load_detections_csv(args.detections);

    std::map<long, std::vector<assoc::Detection>> by_frame;
    long max_frame = 0;
    for (const auto& row : rows) {
        assoc::Detection d;
        d.frame = row.frame;
        d.box = row.box;
        d.confidence = row.confidence;
        if (!row.appearance_ref.empty()) {
            d.appearance = assoc::appearance_from_ref(row.appearance_ref, args.appearance_dim);
        }
        by_frame[row.frame].push_back(std::move(d));
        max_frame = std::max(max_frame, row.frame);
    }

    assoc::Engine engine(args.cfg);
    const long last_frame = args.frames > 0 ? args.frames - 1 : max_frame;
    static const std::vector<assoc::Detection> none;
    for (long frame = 0; frame <= last_frame; ++frame) {
        const auto it = by_frame.find(frame);
        engine.advance_frame(frame, it == by_frame.end() ? none : it->second);
    }

    assoc::write_tracklets_csv(dir / "tracklets.csv", engine.tracklets());
    assoc::write_event_log(dir / "events.log", engine.events());

    int switches = -1;
    if (!args.ground_truth.empty()) {
        const auto gt_rows = csv::read_rows(args.ground_truth);
        if (gt_rows.empty() || gt_rows.front().size() != 2 || gt_rows.front()[0] != "frame") {
            raise(errc::bad_format, args.ground_truth + ": expected ground truth header");
        }
        std::map<std::pair<long, std::size_t>, std::string> truth;
        std::map<long, std::size_t> counter;
        for (std::size_t i = 1; i < gt_rows.size(); ++i) {
            const long frame = csv::parse_long(gt_rows[i][0], args.ground_truth);
            truth[{frame, counter[frame]++}] = gt_rows[i][1];
        }
        switches = assoc::count_identity_switches(engine.consumptions(), truth);
    }

    json arguments{{"detections", args.detections},
                   {"ground_truth", args.ground_truth},
                   {"gamma", args.cfg.overlap_threshold},
                   {"detect_every", args.cfg.detect_every},
                   {"terminate", args.cfg.termination_frames},
                   {"conf_min", args.cfg.det_confidence_min},
                   {"high_confidence", args.cfg.high_confidence},
                   {"appearance_dim", args.appearance_dim},
                   {"frames", args.frames}};
    write_manifest(dir, "associate", arguments, {"tracklets.csv", "events.log"});

    std::cout << "tracklets=" << engine.identity_count();
    if (switches >= 0) std::cout << " switches=" << switches;
    std::cout << '\n';
    return 0;
}

// ---- landmarks ----

int cmd_landmarks_train(const std::string& corpus, int stages, double ridge, int pairs,
                        std::uint64_t feature_seed, const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const fs::path corpus_dir(corpus);
    std::vector<fs::path> images;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.path().extension() == ".pgm") images.push_back(entry.path());
    }
    std::sort(images.begin(), images.end());
    if (images.empty()) raise(errc::config, "no .pgm images in " + corpus);

    std::vector<landmarks::TrainingSample> samples;
    for (const auto& image : images) {
        landmarks::TrainingSample s;
        s.image = landmarks::load_pgm(image);
        fs::path shape = image;
        shape.replace_extension();
        shape += "_shape.csv";
        s.truth = landmarks::load_shape_csv(shape);
        samples.push_back(std::move(s));
    }
    const landmarks::Shape mean_shape = landmarks::load_shape_csv(corpus_dir / "mean_shape.csv");

    const auto features = landmarks::make_pixel_difference_feature(
        landmarks::PixelDiffConfig{pairs, feature_seed});
    const auto trained =
        landmarks::cascade_train(samples, mean_shape, stages, features, ridge);
    landmarks::write_cascade_model(dir / "model.vpl", trained.model);

    std::ofstream errors(dir / "stage_errors.csv", std::ios::trunc);
    errors << "stage,rmse\n";
    for (std::size_t t = 0; t < trained.stage_errors.size(); ++t) {
        errors << (t + 1) << ',' << csv::format_double(trained.stage_errors[t]) << '\n';
    }
    write_manifest(dir, "landmarks-train",
                   json{{"corpus", corpus},
                        {"stages", stages},
                        {"ridge", ridge},
                        {"pairs", pairs},
                        {"feature_seed", feature_seed}},
                   {"model.vpl", "stage_errors.csv"});
    std::cout << "stage errors:";
    for (const double e : trained.stage_errors) std::cout << ' ' << csv::format_double(e);
    std::cout << '\n';
    return 0;
}

int cmd_landmarks_predict(const std::string& model, const std::string& image,
                          const std::string& init, int pairs, std::uint64_t feature_seed,
                          const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const landmarks::CascadeModel cascade = landmarks::load_cascade_model(model);
    const landmarks::GrayImage img = landmarks::load_pgm(image);
    const landmarks::Shape initial = landmarks::load_shape_csv(init);
    const auto features = landmarks::make_pixel_difference_feature(
        landmarks::PixelDiffConfig{pairs, feature_seed});
    const landmarks::Shape predicted = landmarks::cascade_predict(img, initial, cascade, features);
    landmarks::write_shape_csv(dir / "predicted_shape.csv", predicted);
    write_manifest(dir, "landmarks-predict",
                   json{{"model", model},
                        {"image", image},
                        {"init", init},
                        {"pairs", pairs},
                        {"feature_seed", feature_seed}},
                   {"predicted_shape.csv"});
    return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
    std::string embeddings;
    std::string templates;
    std::string protocol;
    std::string matrix;
    std::string pooling = "media";
    bool renormalize = true;
    std::string inject_missing;
    int threads = 1;
    std::string out_dir = "out";
};

int cmd_evaluate(const EvaluateArgs& args) {
    const fs::path dir = prepare_out_dir(args.out_dir);
    const EmbeddingDataset ds = load_embeddings(args.embeddings);
    std::vector<Template> all = load_template_manifest(args.templates, ds);
    if (!args.inject_missing.empty()) {
        const auto ids = read_id_lines(args.inject_missing);
        for (auto& t : all) {
            if (std::find(ids.begin(), ids.end(), t.template_id) != ids.end()) {
                t.missing = true;
                t.members.clear();
            }
        }
    }
    const auto protocol = eval::load_protocol(args.protocol);

    std::optional<EmbeddingMatrix> w;
    if (!args.matrix.empty()) w = load_projection(args.matrix);
    const pooling::PoolingMode mode =
        args.pooling == "average" ? pooling::PoolingMode::average : pooling::PoolingMode::media;

    std::set<int> splits;
    for (const auto& e : protocol) splits.insert(e.split_index);
    if (splits.empty()) raise(errc::config, "protocol lists no splits");

    std::vector<std::map<std::string, double>> per_split;
    std::vector<std::string> outputs;
    for (const int split : splits) {
        std::vector<std::string> gallery_ids, probe_ids;
        for (const auto& e : protocol) {
            if (e.split_index != split) continue;
            if (e.role == eval::Role::gallery) gallery_ids.push_back(e.template_id);
            if (e.role == eval::Role::probe) probe_ids.push_back(e.template_id);
        }
        if (gallery_ids.empty() || probe_ids.empty()) {
            raise(errc::config, "split " + std::to_string(split) +
                                    " lacks gallery or probe templates");
        }
        const auto gallery = select_templates(all, gallery_ids);
        const auto probe = select_templates(all, probe_ids);

        eval::PooledVectors pooled;
        for (const auto* side : {&gallery, &probe}) {
            for (const auto& t : *side) {
                auto v = pooling::pool(t, ds, mode);
                if (v && w) {
                    Eigen::VectorXd projected = embed::project(*w, *v);
                    v = args.renormalize ? embed::l2_normalize(projected) : projected;
                }
                pooled[t.template_id] = std::move(v);
            }
        }

        std::vector<std::string> gallery_subjects, probe_subjects;
        for (const auto& t : gallery) gallery_subjects.push_back(t.subject_id);
        for (const auto& t : probe) probe_subjects.push_back(t.subject_id);

        const SimilarityMatrix m =
            eval::build_similarity_matrix(gallery, probe, pooled, args.threads);
        const auto evaluation = eval::evaluate_split(m, gallery_subjects, probe_subjects);
        per_split.push_back(evaluation.metrics);

        const std::string prefix = "split" + std::to_string(split);
        write_similarity_csv(dir / (prefix + "_similarity.csv"), m);
        eval::write_roc_csv(dir / (prefix + "_roc.csv"), evaluation.roc);
        outputs.push_back(prefix + "_similarity.csv");
        outputs.push_back(prefix + "_roc.csv");
        if (!evaluation.cmc.empty()) {
            eval::write_cmc_csv(dir / (prefix + "_cmc.csv"), evaluation.cmc);
            outputs.push_back(prefix + "_cmc.csv");
        }
        write_metric_csv(dir / (prefix + "_metrics.csv"), evaluation.metrics);
        outputs.push_back(prefix + "_metrics.csv");
    }

    const auto summary = eval::aggregate_splits(per_split);
    eval::write_summary_csv(dir / "summary.csv", summary);
    outputs.push_back("summary.csv");
    write_manifest(dir, "evaluate",
                   json{{"embeddings", args.embeddings},
                        {"templates", args.templates},
                        {"protocol", args.protocol},
                        {"matrix", args.matrix},
                        {"pooling", args.pooling},
                        {"renormalize", args.renormalize},
                        {"inject_missing", args.inject_missing},
                        {"threads", args.threads}},
                   outputs);
    for (const auto& [name, agg] : summary) {
        std::cout << name << " = " << csv::format_double(agg.mean) << " +/- "
                  << csv::format_double(agg.stddev) << '\n';
    }
    return 0;
}

// ---- report ----

int cmd_report(const std::vector<std::string>& inputs, std::vector<std::string> labels,
               const std::string& out_dir) {
    if (inputs.empty()) raise(errc::config, "report needs at least one summary");
    const fs::path dir = prepare_out_dir(out_dir);
    while (labels.size() < inputs.size()) {
        labels.push_back(fs::path(inputs[labels.size()]).parent_path().filename().string());
    }
    std::map<std::string, std::vector<std::pair<double, double>>> table;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto rows = csv::read_rows(inputs[i]);
        if (rows.empty() || rows.front().size() != 3 || rows.front()[0] != "metric") {
            raise(errc::bad_format, inputs[i] + ": expected summary header");
        }
        for (std::size_t r = 1; r < rows.size(); ++r) {
            auto& cells = table[rows[r][0]];
            cells.resize(inputs.size(), {0.0, 0.0});
            cells[i] = {csv::parse_double(rows[r][1], inputs[i]),
                        csv::parse_double(rows[r][2], inputs[i])};
        }
    }
    std::ofstream out(dir / "report.csv", std::ios::trunc);
    out << "metric";
    for (const auto& label : labels) out << ',' << label << "_mean," << label << "_std";
    out << '\n';
    for (const auto& [metric, cells] : table) {
        out << metric;
        for (const auto& [mean, stddev] : cells) {
            out << ',' << csv::format_double(mean) << ',' << csv::format_double(stddev);
        }
        out << '\n';
    }
    write_manifest(dir, "report", json{{"inputs", inputs}, {"labels", labels}}, {"report.csv"});
    return 0;
}

// ---- synth ----

int cmd_synth_clusters(const synth::ClusterSpec& spec, int video_frames, double frame_noise,
                       double train_fraction, double impostor_fraction,
                       const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const synth::ClusterData data =
        video_frames > 0 ? synth::gen_imbalanced_media(spec, video_frames, frame_noise)
                         : synth::gen_clusters(spec);
    write_embeddings(dir / "embeddings.vpe", data.dataset);
    write_template_manifest(dir / "templates.csv", data.templates, data.dataset);
    const auto protocol =
        synth::make_single_split_protocol(data, train_fraction, impostor_fraction, spec.seed);
    eval::write_protocol(dir / "protocol.csv", protocol);
    write_manifest(dir, "synth-clusters",
                   json{{"subjects", spec.subjects},
                        {"per_subject", spec.per_subject},
                        {"dim", spec.ambient_dim},
                        {"intrinsic", spec.intrinsic_dim},
                        {"noise", spec.noise_sigma},
                        {"media_per_subject", spec.media_per_subject},
                        {"video_frames", video_frames},
                        {"frame_noise", frame_noise},
                        {"train_fraction", train_fraction},
                        {"impostor_fraction", impostor_fraction},
                        {"seed", spec.seed}},
                   {"embeddings.vpe", "templates.csv", "protocol.csv"});
    std::cout << "generated " << data.dataset.items.size() << " embeddings, "
              << data.templates.size() << " templates\n";
    return 0;
}

int cmd_synth_scenario(const std::string& script_path, std::uint64_t seed, double conf_noise,
                       const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const auto script = synth::ScenarioScript::parse_file(script_path);
    const auto scenario = synth::gen_tracking_scenario(script, seed, conf_noise);
    synth::write_detections_csv(dir / "detections.csv", scenario, true);
    synth::write_ground_truth_csv(dir / "ground_truth.csv", scenario);
    write_manifest(dir, "synth-scenario",
                   json{{"script", script_path}, {"seed", seed}, {"conf_noise", conf_noise}},
                   {"detections.csv", "ground_truth.csv"});
    std::cout << "generated " << scenario.rows.size() << " detection rows\n";
    return 0;
}

int cmd_synth_shapes(const synth::ShapeCorpusSpec& spec, const std::string& out_dir) {
    const fs::path dir = prepare_out_dir(out_dir);
    const auto corpus = synth::gen_shape_corpus(spec);
    std::vector<std::string> outputs;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
        std::string stem = std::to_string(i);
        while (stem.size() < 3) stem.insert(stem.begin(), '0');
        landmarks::write_pgm(dir / (stem + ".pgm"), corpus.samples[i].image);
        landmarks::write_shape_csv(dir / (stem + "_shape.csv"), corpus.samples[i].truth);
    }
    landmarks::write_shape_csv(dir / "mean_shape.csv", corpus.mean_shape);
    write_manifest(dir, "synth-shapes",
                   json{{"samples", spec.samples},
                        {"landmarks", spec.landmarks},
                        {"image_size", spec.image_size},
                        {"seed", spec.seed}},
                   {"mean_shape.csv"});
    std::cout << "generated " << corpus.samples.size() << " shape samples\n";
    return 0;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"face verification pipeline toolkit"};
    app.require_subcommand(1);

    // train
    TrainArgs train_args;
    train_args.cfg.iterations = 5000;
    auto* train = app.add_subcommand("train", "learn a triplet projection from embeddings");
    train->add_option("--embeddings", train_args.embeddings)->required();
    train->add_option("--objective", train_args.objective)
        ->check(CLI::IsMember({"tse", "tde"}));
    train->add_option("--dim", train_args.cfg.output_dim);
    train->add_option("--margin", train_args.cfg.margin);
    train->add_option("--lr", train_args.cfg.learning_rate);
    train->add_option("--negatives", train_args.cfg.negatives_pool);
    train->add_option("--iterations", train_args.cfg.iterations);
    train->add_option("--seed", train_args.cfg.seed);
    train->add_option("--out-dir", train_args.out_dir);

    // project
    std::string project_embeddings, project_matrix, project_out = "out";
    bool project_renormalize = true;
    auto* project = app.add_subcommand("project", "apply a projection to an embedding file");
    project->add_option("--embeddings", project_embeddings)->required();
    project->add_option("--matrix", project_matrix)->required();
    project->add_flag("--renormalize,!--no-renormalize", project_renormalize);
    project->add_option("--out-dir", project_out);

    // pool
    std::string pool_embeddings, pool_templates, pool_mode = "average", pool_missing,
                                                 pool_out = "out";
    auto* pool = app.add_subcommand("pool", "pool template members into one vector each");
    pool->add_option("--embeddings", pool_embeddings)->required();
    pool->add_option("--templates", pool_templates)->required();
    pool->add_option("--mode", pool_mode)->check(CLI::IsMember({"average", "media"}));
    pool->add_option("--inject-missing", pool_missing);
    pool->add_option("--out-dir", pool_out);

    // score
    std::string score_gallery, score_probe, score_pairs, score_out = "out";
    auto* score = app.add_subcommand("score", "similarity matrix or pair list scores");
    score->add_option("--gallery", score_gallery)->required();
    score->add_option("--probe", score_probe);
    score->add_option("--pairs", score_pairs);
    score->add_option("--out-dir", score_out);

    // fuse
    std::vector<std::string> fuse_inputs;
    std::vector<double> fuse_weights;
    std::string fuse_out = "out";
    auto* fuse = app.add_subcommand("fuse", "add similarity matrices entrywise");
    fuse->add_option("--in", fuse_inputs)->expected(-1);
    fuse->add_option("--weights", fuse_weights)->expected(-1);
    fuse->add_option("--out-dir", fuse_out);

    // associate
    AssociateArgs assoc_args;
    auto* associate = app.add_subcommand("associate", "multi-face tracklet association");
    associate->add_option("--detections", assoc_args.detections)->required();
    associate->add_option("--gt", assoc_args.ground_truth);
    associate->add_option("--gamma", assoc_args.cfg.overlap_threshold);
    associate->add_option("--detect-every", assoc_args.cfg.detect_every);
    associate->add_option("--terminate", assoc_args.cfg.termination_frames);
    associate->add_option("--conf-min", assoc_args.cfg.det_confidence_min);
    associate->add_option("--high-confidence", assoc_args.cfg.high_confidence);
    associate->add_option("--appearance-dim", assoc_args.appearance_dim);
    associate->add_option("--frames", assoc_args.frames,
                          "frames to run; 0 stops at the last detection row");
    associate->add_option("--out-dir", assoc_args.out_dir);

    // landmarks-train
    std::string lmt_corpus, lmt_out = "out";
    int lmt_stages = 5, lmt_pairs = 8;
    double lmt_ridge = 1e-3;
    std::uint64_t lmt_seed = 17;
    auto* lmt = app.add_subcommand("landmarks-train", "fit a cascaded shape regressor");
    lmt->add_option("--corpus", lmt_corpus)->required();
    lmt->add_option("--stages", lmt_stages);
    lmt->add_option("--ridge", lmt_ridge);
    lmt->add_option("--pairs", lmt_pairs);
    lmt->add_option("--feature-seed", lmt_seed);
    lmt->add_option("--out-dir", lmt_out);

    // landmarks-predict
    std::string lmp_model, lmp_image, lmp_init, lmp_out = "out";
    int lmp_pairs = 8;
    std::uint64_t lmp_seed = 17;
    auto* lmp = app.add_subcommand("landmarks-predict", "run a trained cascade on one image");
    lmp->add_option("--model", lmp_model)->required();
    lmp->add_option("--image", lmp_image)->required();
    lmp->add_option("--init", lmp_init)->required();
    lmp->add_option("--pairs", lmp_pairs);
    lmp->add_option("--feature-seed", lmp_seed);
    lmp->add_option("--out-dir", lmp_out);

    // evaluate
    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "run a verification protocol end to end");
    evaluate->add_option("--embeddings", eval_args.embeddings)->required();
    evaluate->add_option("--templates", eval_args.templates)->required();
    evaluate->add_option("--protocol", eval_args.protocol)->required();
    evaluate->add_option("--matrix", eval_args.matrix);
    evaluate->add_option("--pooling", eval_args.pooling)
        ->check(CLI::IsMember({"average", "media"}));
    evaluate->add_flag("--renormalize,!--no-renormalize", eval_args.renormalize);
    evaluate->add_option("--inject-missing", eval_args.inject_missing);
    evaluate->add_option("--threads", eval_args.threads);
    evaluate->add_option("--out-dir", eval_args.out_dir);

    // report
    std::vector<std::string> report_inputs, report_labels;
    std::string report_out = "out";
    auto* report = app.add_subcommand("report", "merge evaluation summaries side by side");
    report->add_option("--in", report_inputs)->expected(-1);
    report->add_option("--label", report_labels)->expected(-1);
    report->add_option("--out-dir", report_out);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "deterministic synthetic data generators");
    synth_cmd->require_subcommand(1);

    synth::ClusterSpec cluster_spec;
    int synth_video_frames = 0;
    double synth_frame_noise = 0.02, synth_train_fraction = 0.5, synth_impostors = 0.0;
    std::string synth_clusters_out = "out";
    auto* synth_clusters = synth_cmd->add_subcommand("clusters", "labeled embedding clusters");
    synth_clusters->add_option("--subjects", cluster_spec.subjects);
    synth_clusters->add_option("--per-subject", cluster_spec.per_subject);
    synth_clusters->add_option("--dim", cluster_spec.ambient_dim);
    synth_clusters->add_option("--intrinsic", cluster_spec.intrinsic_dim);
    synth_clusters->add_option("--noise", cluster_spec.noise_sigma);
    synth_clusters->add_option("--media-per-subject", cluster_spec.media_per_subject);
    synth_clusters->add_option("--video-frames", synth_video_frames,
                               "imbalanced-media mode: frames in each subject's video");
    synth_clusters->add_option("--frame-noise", synth_frame_noise);
    synth_clusters->add_option("--train-fraction", synth_train_fraction);
    synth_clusters->add_option("--impostor-fraction", synth_impostors);
    synth_clusters->add_option("--seed", cluster_spec.seed);
    synth_clusters->add_option("--out-dir", synth_clusters_out);

    std::string scenario_script, scenario_out = "out";
    std::uint64_t scenario_seed = 1;
    double scenario_noise = 0.0;
    auto* synth_scenario = synth_cmd->add_subcommand("scenario", "detection stream from a script");
    synth_scenario->add_option("--script", scenario_script)->required();
    synth_scenario->add_option("--seed", scenario_seed);
    synth_scenario->add_option("--conf-noise", scenario_noise);
    synth_scenario->add_option("--out-dir", scenario_out);

    synth::ShapeCorpusSpec shape_spec;
    std::string shapes_out = "out";
    auto* synth_shapes = synth_cmd->add_subcommand("shapes", "landmark regression corpus");
    synth_shapes->add_option("--samples", shape_spec.samples);
    synth_shapes->add_option("--landmarks", shape_spec.landmarks);
    synth_shapes->add_option("--size", shape_spec.image_size);
    synth_shapes->add_option("--seed", shape_spec.seed);
    synth_shapes->add_option("--out-dir", shapes_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (train->parsed()) return cmd_train(train_args);
    if (project->parsed()) {
        return cmd_project(project_embeddings, project_matrix, project_renormalize, project_out);
    }
    if (pool->parsed()) {
        return cmd_pool(pool_embeddings, pool_templates, pool_mode, pool_missing, pool_out);
    }
    if (score->parsed()) {
        if (score_pairs.empty() && score_probe.empty()) {
            raise(errc::config, "score needs --probe or --pairs");
        }
        return cmd_score(score_gallery, score_probe, score_pairs, score_out);
    }
    if (fuse->parsed()) return cmd_fuse(fuse_inputs, fuse_weights, fuse_out);
    if (associate->parsed()) return cmd_associate(assoc_args);
    if (lmt->parsed()) {
        return cmd_landmarks_train(lmt_corpus, lmt_stages, lmt_ridge, lmt_pairs, lmt_seed,
                                   lmt_out);
    }
    if (lmp->parsed()) {
        return cmd_landmarks_predict(lmp_model, lmp_image, lmp_init, lmp_pairs, lmp_seed,
                                     lmp_out);
    }
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    if (report->parsed()) return cmd_report(report_inputs, report_labels, report_out);
    if (synth_cmd->parsed()) {
        if (synth_clusters->parsed()) {
            return cmd_synth_clusters(cluster_spec, synth_video_frames, synth_frame_noise,
                                      synth_train_fraction, synth_impostors, synth_clusters_out);
        }
        if (synth_scenario->parsed()) {
            return cmd_synth_scenario(scenario_script, scenario_seed, scenario_noise,
                                      scenario_out);
        }
        if (synth_shapes->parsed()) return cmd_synth_shapes(shape_spec, shapes_out);
    }
    return 2;
}

} // namespace vpe::cli
