#include "s2n/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "s2n/bench.hpp"
#include "s2n/dataset_io.hpp"
#include "s2n/error.hpp"
#include "s2n/homophily.hpp"
#include "s2n/nn/serialize.hpp"
#include "s2n/synthetic.hpp"
#include "s2n/translate.hpp"

namespace s2n::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json to_json(const RunConfig& c) {
  return {{"command", c.command},       {"dataset", c.dataset},
          {"model", c.model_path},      {"out", c.out},
          {"preset", c.preset},         {"eval_split", c.eval_split},
          {"seed", c.seed},             {"encoder", c.encoder},
          {"pool", c.pool},             {"set_layers", c.set_layers},
          {"graph_layers", c.graph_layers}, {"hidden_dim", c.hidden_dim},
          {"learning_rate", c.learning_rate}, {"weight_decay", c.weight_decay},
          {"dropout", c.dropout},       {"clip", c.clip},
          {"epochs", c.epochs},         {"json", c.json},
          {"table", c.table}};
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

// Settings from a config file: either a bare RunConfig object or a document
// carrying one under "provenance"/"run" (every output we write has that).
json config_values(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
  if (doc.contains("provenance")) doc = doc["provenance"];
  if (doc.contains("run")) doc = doc["run"];
  if (!doc.is_object()) throw Error(ErrorCode::Parse, path + ": expected a JSON object");
  return doc;
}

// Binds one RunConfig field to a CLI option, keeps the file value when the
// flag is absent. Several subcommands share a field, so only options of the
// active subcommand take part.
struct Binder {
  std::vector<std::function<void(const CLI::App*, const json&)>> fill;

  template <typename T>
  void add(CLI::Option* opt, const char* key, T& field) {
    fill.push_back([opt, key, &field](const CLI::App* active, const json& file) {
      if (!owns(active, opt)) return;
      if (opt->count() == 0 && file.contains(key)) field = file.at(key).get<T>();
    });
  }

  static bool owns(const CLI::App* app, const CLI::Option* opt) {
    for (const CLI::Option* o : app->get_options())
      if (o == opt) return true;
    return false;
  }
};

json provenance(const RunConfig& c, const std::string& dataset_dir) {
  json p;
  p["tool_version"] = kToolVersion;
  p["run"] = to_json(c);
  if (!dataset_dir.empty() && fs::is_directory(dataset_dir)) {
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << dataset_checksum(dataset_dir);
    p["dataset_checksum"] = hex.str();
  }
  return p;
}

Split parse_eval_split(const std::string& text) {
  const auto s = parse_split(text);
  if (!s || *s == Split::Train) throw Error(ErrorCode::InvalidConfig, "split must be valid or test");
  return *s;
}

json s2n_json(const S2NGraph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.adjacency.undirected_edges()) edges.push_back({i, j});
  return {{"members", g.members}, {"edges", std::move(edges)}, {"train_count", g.train_count}};
}

nn::ModelConfig model_config(const RunConfig& c) {
  nn::ModelConfig m;
  m.encoder = nn::parse_encoder(c.encoder);
  m.pool = nn::parse_pool(c.pool);
  m.set_layers = c.set_layers;
  m.graph_layers = c.graph_layers;
  m.hidden_dim = c.hidden_dim;
  return m;
}

nn::TrainConfig train_config(const RunConfig& c) {
  nn::TrainConfig t;
  t.learning_rate = c.learning_rate;
  t.weight_decay = c.weight_decay;
  t.dropout = c.dropout;
  t.clip = c.clip;
  t.epochs = c.epochs;
  t.seed = c.seed;
  t.validate();
  return t;
}

std::string fmt(std::optional<double> v, int precision = 4) {
  if (!v) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << *v;
  return s.str();
}

json row_json(const StatsRow& r) {
  json j = {{"num_nodes", r.num_nodes},     {"num_edges", r.num_edges},
            {"density", r.density},         {"num_classes", r.num_classes},
            {"isolated_excluded", r.isolated_excluded}};
  j["node_homophily"] = r.node_homophily ? json(*r.node_homophily) : json(nullptr);
  j["edge_homophily"] = r.edge_homophily ? json(*r.edge_homophily) : json(nullptr);
  return j;
}

json report_json(const BenchReport& r) {
  return {{"train_throughput", r.train_throughput}, {"infer_throughput", r.infer_throughput},
          {"train_latency", r.train_latency},       {"infer_latency", r.infer_latency},
          {"param_count", r.param_count},           {"epochs_measured", r.epochs_measured},
          {"train_samples", r.train_samples},       {"infer_samples", r.infer_samples},
          {"train_batches", r.train_batches},       {"infer_batches", r.infer_batches},
          {"train_wall_time", r.train_wall_time},   {"infer_wall_time", r.infer_wall_time},
          {"warmup_epoch", r.warmup_epoch},
          {"note", "full-batch: batches = epochs; one untimed warm-up epoch precedes measurement"}};
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
  const auto dataset = generate_synthetic(synth_preset(c.preset), c.seed);
  save_dataset(dataset, c.out);
  write_text(fs::path(c.out) / "provenance.json", provenance(c, c.out).dump(1) + "\n");
  out << "wrote " << dataset.num_subgraphs() << " subgraphs over " << dataset.graph.num_nodes << " nodes to "
      << c.out << "\n";
  return 0;
}

int cmd_translate(const RunConfig& c, std::ostream& out) {
  const auto dataset = load_dataset(c.dataset);
  const auto graphs = build_stagewise(dataset, parse_eval_split(c.eval_split));
  write_text(fs::path(c.out) / "train.s2n.json", s2n_json(graphs.train_graph).dump() + "\n");
  write_text(fs::path(c.out) / "eval.s2n.json", s2n_json(graphs.eval_graph).dump() + "\n");
  write_text(fs::path(c.out) / "provenance.json", provenance(c, c.dataset).dump(1) + "\n");
  out << "train graph: " << graphs.train_graph.num_nodes() << " nodes, " << graphs.train_graph.num_edges()
      << " edges; eval graph: " << graphs.eval_graph.num_nodes() << " nodes, " << graphs.eval_graph.num_edges()
      << " edges\n";
  return 0;
}

int cmd_stats(const RunConfig& c, std::ostream& out) {
  const auto dataset = load_dataset(c.dataset);
  const auto stats = dataset_stats(dataset, build_full(dataset));
  if (c.json) {
    out << json{{"before", row_json(stats.before)}, {"after", row_json(stats.after)}}.dump(1) << "\n";
    return 0;
  }
  auto line = [&](const std::string& name, const std::string& a, const std::string& b) {
    out << std::left << std::setw(16) << name << std::right << std::setw(14) << a << std::setw(14) << b << "\n";
  };
  line("", "original", "S2N");
  line("# nodes", std::to_string(stats.before.num_nodes), std::to_string(stats.after.num_nodes));
  line("# edges", std::to_string(stats.before.num_edges), std::to_string(stats.after.num_edges));
  line("density", fmt(stats.before.density), fmt(stats.after.density));
  line("# classes", std::to_string(stats.before.num_classes), std::to_string(stats.after.num_classes));
  line("node homophily", fmt(stats.before.node_homophily), fmt(stats.after.node_homophily));
  line("edge homophily", fmt(stats.before.edge_homophily), fmt(stats.after.edge_homophily));
  line("isolated", std::to_string(stats.before.isolated_excluded), std::to_string(stats.after.isolated_excluded));
  return 0;
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  const auto dataset = load_dataset(c.dataset);
  nn::SavedModel saved;
  saved.model_config = model_config(c);
  saved.train_config = train_config(c);
  auto result = nn::train(dataset, saved.model_config, saved.train_config);
  saved.model = std::move(result.model);
  saved.history = std::move(result.history);
  json doc = json::parse(nn::to_json(saved));
  doc["provenance"] = provenance(c, c.dataset);
  write_text(c.out, doc.dump(1) + "\n");
  const auto& last = saved.history.back();
  if (c.json) {
    out << json{{"epochs", saved.history.size()}, {"final_loss", last.loss}, {"valid_micro_f1", last.valid_f1}}.dump()
        << "\n";
  } else {
    out << "trained " << saved.history.size() << " epochs; final loss " << last.loss << ", valid micro-F1 "
        << last.valid_f1 << "\n";
  }
  return 0;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  const auto saved = nn::from_json(read_text(c.model_path));
  const auto dataset = load_dataset(c.dataset);
  const double f1 = nn::evaluate(saved.model, dataset, parse_eval_split(c.eval_split));
  if (c.json)
    out << json{{"split", c.eval_split}, {"micro_f1", f1}}.dump() << "\n";
  else
    out << std::setprecision(6) << f1 << "\n";
  return 0;
}

int cmd_bench(const RunConfig& c, std::ostream& out) {
  const auto dataset = load_dataset(c.dataset);
  const auto tc = train_config(c);
  SteadyClock clock;
  if (!c.table) {
    const auto report = measure(dataset, model_config(c), tc, c.epochs, clock);
    if (c.json) {
      out << report_json(report).dump(1) << "\n";
    } else {
      out << "params " << report.param_count << "\n"
          << "train throughput " << report.train_throughput << " subgraphs/s, latency " << report.train_latency
          << " s/pass\n"
          << "infer throughput " << report.infer_throughput << " subgraphs/s, latency " << report.infer_latency
          << " s/pass\n";
    }
    return 0;
  }
  json rows = json::array();
  if (!c.json)
    out << std::left << std::setw(14) << "model" << std::right << std::setw(10) << "params" << std::setw(16)
        << "train sg/s" << std::setw(16) << "infer sg/s" << std::setw(14) << "train s/pass" << std::setw(14)
        << "infer s/pass" << "\n";
  for (const char* encoder : {"gcn", "linkx-i"})
    for (std::size_t layers : {1u, 2u}) {
      RunConfig variant = c;
      variant.encoder = encoder;
      variant.graph_layers = layers;
      const auto report = measure(dataset, model_config(variant), tc, c.epochs, clock);
      const std::string name = std::string(encoder) + "/" + std::to_string(layers);
      if (c.json) {
        json r = report_json(report);
        r["model"] = name;
        rows.push_back(std::move(r));
        continue;
      }
      out << std::left << std::setw(14) << name << std::right << std::setw(10) << report.param_count
          << std::setw(16) << fmt(report.train_throughput, 1) << std::setw(16) << fmt(report.infer_throughput, 1)
          << std::setw(14) << fmt(report.train_latency, 6) << std::setw(14) << fmt(report.infer_latency, 6) << "\n";
    }
  if (c.json) out << rows.dump(1) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subgraph-to-node translation toolkit", "s2n"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  RunConfig c;
  std::string config_path;
  Binder bind;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; explicit flags take precedence");
  };
  auto add_dataset = [&](CLI::App* sub) { bind.add(sub->add_option("dataset", c.dataset, "Dataset directory"), "dataset", c.dataset); };
  auto add_model_flags = [&](CLI::App* sub) {
    bind.add(sub->add_option("--encoder", c.encoder, "gcn | linkx-i"), "encoder", c.encoder);
    bind.add(sub->add_option("--pool", c.pool, "sum | max"), "pool", c.pool);
    bind.add(sub->add_option("--layers-set", c.set_layers, "Set encoder layers (2|4)"), "set_layers", c.set_layers);
    bind.add(sub->add_option("--layers-graph", c.graph_layers, "Graph encoder layers (1|2)"), "graph_layers", c.graph_layers);
    bind.add(sub->add_option("--hidden", c.hidden_dim, "Hidden width"), "hidden_dim", c.hidden_dim);
    bind.add(sub->add_option("--lr", c.learning_rate, "Learning rate"), "learning_rate", c.learning_rate);
    bind.add(sub->add_option("--weight-decay", c.weight_decay, "Weight decay in [1e-9, 1e-6]"), "weight_decay", c.weight_decay);
    bind.add(sub->add_option("--dropout", c.dropout, "Channel dropout, 0.0 ... 0.5"), "dropout", c.dropout);
    bind.add(sub->add_option("--clip", c.clip, "Gradient-norm clip, 0.0 ... 0.5 (0 = off)"), "clip", c.clip);
    bind.add(sub->add_option("--epochs", c.epochs, "Epochs"), "epochs", c.epochs);
    bind.add(sub->add_option("--seed", c.seed, "Random seed"), "seed", c.seed);
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_common(synth);
  bind.add(synth->add_option("--preset", c.preset, "separable | hard | multilabel"), "preset", c.preset);
  bind.add(synth->add_option("--seed", c.seed, "Random seed"), "seed", c.seed);
  bind.add(synth->add_option("--out", c.out, "Output directory"), "out", c.out);

  auto* translate = app.add_subcommand("translate", "Write the stagewise S2N graphs");
  add_common(translate);
  add_dataset(translate);
  bind.add(translate->add_option("--eval-split", c.eval_split, "valid | test"), "eval_split", c.eval_split);
  bind.add(translate->add_option("--out", c.out, "Output directory"), "out", c.out);

  auto* stats = app.add_subcommand("stats", "Graph statistics before and after translation");
  add_common(stats);
  add_dataset(stats);
  bind.add(stats->add_flag("--json", c.json, "Emit JSON"), "json", c.json);

  auto* train = app.add_subcommand("train", "Train a set encoder + graph encoder");
  add_common(train);
  add_dataset(train);
  add_model_flags(train);
  bind.add(train->add_option("--out", c.out, "Model file"), "out", c.out);
  bind.add(train->add_flag("--json", c.json, "Emit JSON"), "json", c.json);

  auto* eval = app.add_subcommand("eval", "Micro-F1 of a trained model");
  add_common(eval);
  bind.add(eval->add_option("model", c.model_path, "Model file"), "model", c.model_path);
  add_dataset(eval);
  bind.add(eval->add_option("--split", c.eval_split, "valid | test"), "eval_split", c.eval_split);
  bind.add(eval->add_flag("--json", c.json, "Emit JSON"), "json", c.json);

  auto* bench = app.add_subcommand("bench", "Throughput and latency");
  add_common(bench);
  add_dataset(bench);
  add_model_flags(bench);
  bind.add(bench->add_flag("--json", c.json, "Emit JSON"), "json", c.json);
  bind.add(bench->add_flag("--table", c.table, "Compare encoder configurations"), "table", c.table);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    app.exit(e, msg, msg);
    err << "E_PARSE: " << msg.str();
    if (msg.str().empty() || msg.str().back() != '\n') err << "\n";
    return 2;
  }

  try {
    c.command = app.get_subcommands().front()->get_name();
    if (c.command == "bench" && app.get_subcommands().front()->get_option("--epochs")->count() == 0) c.epochs = 50;
    if (!config_path.empty()) {
      const json file = config_values(config_path);
      for (auto& f : bind.fill) f(app.get_subcommands().front(), file);
    }

    auto require = [&](const std::string& value, const char* what) {
      if (value.empty()) throw Error(ErrorCode::InvalidConfig, std::string("missing required setting: ") + what);
    };
    if (c.command == "synth" || c.command == "translate" || c.command == "train") require(c.out, "--out");
    if (c.command != "synth") require(c.dataset, "dataset");
    if (c.command == "eval") require(c.model_path, "model");

    if (c.command == "synth") return cmd_synth(c, out);
    if (c.command == "translate") return cmd_translate(c, out);
    if (c.command == "stats") return cmd_stats(c, out);
    if (c.command == "train") return cmd_train(c, out);
    if (c.command == "eval") return cmd_eval(c, out);
    return cmd_bench(c, out);
  } catch (const Error& e) {
    err << error_prefix(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidConfig ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    err << "E_PARSE: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "E_IO: " << e.what() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace s2n::cli
