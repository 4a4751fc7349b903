// witkit — command-line surface over the witness library.
//
// Every command prints one JSON report to standard output; --out FILE writes
// the same bytes to a file. Reports echo the command, digest the inputs, and
// record the budgets actually used, so identical command + seed + inputs
// produce byte-identical reports.
//
// Exit codes: 0 verdict computed (including negative verdicts),
//             1 usage, parse, or precondition error,
//             2 inconclusive at the configured budget.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <iostream>
#include <map>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "witkit/core.hpp"
#include "witkit/io.hpp"
#include "witkit/optimality.hpp"
#include "witkit/relations.hpp"
#include "witkit/witness.hpp"
#include "witkit/zoo.hpp"

namespace {

using witkit::BipartiteDims;
using witkit::DensityMatrix;
using witkit::HermitianOperator;
using witkit::ProductVector;
using witkit::SeeSawOptions;
using witkit::io::JsonNode;
using witkit::io::OperatorFile;

struct LoadedFile {
  std::string path;
  std::string digest;
  OperatorFile file;
};

LoadedFile load(const std::string& path) {
  const std::string bytes = witkit::io::read_file(path);
  try {
    return {path, witkit::io::hex_digest(bytes), witkit::io::parse_operator(bytes)};
  } catch (const witkit::io::ParseError& err) {
    throw witkit::io::ParseError(path + ": " + err.what());
  }
}

JsonNode vector_node(const witkit::Vector& v) {
  JsonNode arr = JsonNode::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push(JsonNode::complex_pair(v(i)));
  return arr;
}

JsonNode matrix_node(const witkit::Matrix& m) {
  JsonNode rows = JsonNode::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    JsonNode row = JsonNode::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push(JsonNode::complex_pair(m(r, c)));
    rows.push(std::move(row));
  }
  return rows;
}

JsonNode dims_node(const BipartiteDims& dims) {
  JsonNode arr = JsonNode::array();
  arr.push(dims.d1);
  arr.push(dims.d2);
  return arr;
}

JsonNode operator_node(const HermitianOperator& op) {
  JsonNode obj = JsonNode::object();
  obj.set("dims", dims_node(op.dims()));
  obj.set("matrix", matrix_node(op.matrix()));
  return obj;
}

JsonNode product_node(const ProductVector& p) {
  JsonNode obj = JsonNode::object();
  obj.set("left", vector_node(p.left()));
  obj.set("right", vector_node(p.right()));
  return obj;
}

JsonNode input_node(const LoadedFile& in) {
  JsonNode obj = JsonNode::object();
  obj.set("path", in.path);
  obj.set("digest", in.digest);
  obj.set("kind", witkit::io::kind_name(in.file.kind()));
  return obj;
}

// Seeds are rendered as strings: they are identifiers, not quantities, and
// 64-bit values do not survive as JSON numbers.
JsonNode budget_node(const SeeSawOptions& opts) {
  JsonNode obj = JsonNode::object();
  obj.set("restarts", opts.restarts);
  obj.set("max_sweeps", opts.max_sweeps);
  obj.set("value_tol", opts.value_tol);
  obj.set("seed", std::to_string(opts.seed));
  return obj;
}

JsonNode echo_node(int argc, char** argv) {
  JsonNode arr = JsonNode::array();
  for (int i = 1; i < argc; ++i) arr.push(std::string(argv[i]));
  return arr;
}

std::string verdict_name(witkit::WitnessVerdict v) {
  switch (v) {
    case witkit::WitnessVerdict::witness:
      return "witness";
    case witkit::WitnessVerdict::psd_not_witness:
      return "psd_not_witness";
    case witkit::WitnessVerdict::violates_separable_positivity:
      return "violates_separable_positivity";
  }
  return "unknown";
}

std::string outcome_name(witkit::JointOutcome o) {
  switch (o) {
    case witkit::JointOutcome::psd_found:
      return "psd_found";
    case witkit::JointOutcome::joint_detection:
      return "joint_detection";
    case witkit::JointOutcome::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

std::string simplex_kind_name(witkit::SimplexKind k) {
  return k == witkit::SimplexKind::psd_found ? "psd_found" : "all_witnesses";
}

std::string structure_name(witkit::StructureVerdict v) {
  switch (v) {
    case witkit::StructureVerdict::consistent_with_optimal:
      return "consistent_with_optimal";
    case witkit::StructureVerdict::refuted:
      return "refuted";
    case witkit::StructureVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

int emit(const JsonNode& report, const std::string& out_path, int code) {
  const std::string text = report.dump();
  std::cout << text;
  if (!out_path.empty()) witkit::io::write_file(out_path, text);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  if (const char* env = std::getenv("WITKIT_SEED")) {
    const std::string text = env;
    std::uint64_t parsed = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, parsed);
    if (ec != std::errc{} || ptr != end) {
      std::cerr << "error: WITKIT_SEED must be a decimal unsigned integer, got \"" << text
                << "\"\n";
      return 1;
    }
    seed = parsed;
  }

  CLI::App app{"entanglement witness toolkit"};
  app.require_subcommand(1);

  int restarts = 50;
  int sweeps = 200;
  int samples = 200;
  std::string report_out;

  const auto add_report_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", report_out, "also write the report to this file");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed (default: WITKIT_SEED or 1)");
  };
  const auto add_budget = [&](CLI::App* cmd) {
    add_seed(cmd);
    cmd->add_option("--restarts", restarts, "search restarts")->capture_default_str();
    cmd->add_option("--sweeps", sweeps, "sweep cap per restart")->capture_default_str();
  };

  // gen: zoo constructors to a file.
  std::string gen_out;
  std::string bell_which = "phi+";
  int swap_n = 2;
  double werner_p = 0.5;
  std::string state_path;
  int d1 = 2;
  int d2 = 2;
  const auto add_gen_out = [&](CLI::App* cmd) {
    cmd->add_option("-o,--output", gen_out, "output file")->required();
  };

  CLI::App* gen = app.add_subcommand("gen", "write a generator output to a file");
  gen->require_subcommand(1);
  CLI::App* gen_bell = gen->add_subcommand("bell", "a Bell vector on (2,2)");
  gen_bell->add_option("--which", bell_which, "phi+ | phi- | psi+ | psi-")->capture_default_str();
  add_gen_out(gen_bell);
  CLI::App* gen_swap = gen->add_subcommand("swap", "the swap operator on (n,n)");
  gen_swap->add_option("--n", swap_n, "local dimension")->capture_default_str();
  add_gen_out(gen_swap);
  CLI::App* gen_werner = gen->add_subcommand("werner", "p-weighted singlet/maximally-mixed blend");
  gen_werner->add_option("--p", werner_p, "mixing weight in [0,1]")->required();
  add_gen_out(gen_werner);
  CLI::App* gen_ptw =
      gen->add_subcommand("pt-witness", "partial transpose of the projector onto a pure state");
  gen_ptw->add_option("--state", state_path, "pure-state file with Schmidt rank >= 2")->required();
  add_gen_out(gen_ptw);
  CLI::App* gen_rdensity = gen->add_subcommand("random-density", "Ginibre-normalized density");
  CLI::App* gen_rpure = gen->add_subcommand("random-pure", "random pure state");
  CLI::App* gen_rproduct = gen->add_subcommand("random-product", "random product vector");
  for (CLI::App* cmd : {gen_rdensity, gen_rpure, gen_rproduct}) {
    cmd->add_option("--d1", d1, "left dimension")->capture_default_str();
    cmd->add_option("--d2", d2, "right dimension")->capture_default_str();
    add_seed(cmd);
    add_gen_out(cmd);
  }

  std::string w_path;
  std::string w2_path;
  std::string rho_path;
  std::string construct_out;
  std::string shift_out;
  std::vector<std::string> family_paths;

  CLI::App* certify = app.add_subcommand("certify", "tri-state witness certification");
  certify->add_option("witness", w_path, "Hermitian operator file")->required();
  add_budget(certify);
  add_report_out(certify);

  CLI::App* detect = app.add_subcommand("detect", "detection margin of a state under a witness");
  detect->add_option("witness", w_path, "Hermitian operator file")->required();
  detect->add_option("state", rho_path, "density or pure-state file")->required();
  add_report_out(detect);

  CLI::App* construct =
      app.add_subcommand("construct", "partial-transpose witness from an NPT state");
  construct->add_option("state", rho_path, "density or pure-state file")->required();
  construct->add_option("-o,--output", construct_out, "witness output file")->required();
  add_report_out(construct);

  CLI::App* finer_cmd =
      app.add_subcommand("finer", "detection-set inclusion with its (a, shift) certificate");
  finer_cmd->add_option("w1", w_path, "witness whose detections must transfer")->required();
  finer_cmd->add_option("w2", w2_path, "witness that must detect them")->required();
  finer_cmd->add_option("--shift-out", shift_out, "write the PSD shift to this file when finer");
  add_budget(finer_cmd);
  add_report_out(finer_cmd);

  CLI::App* prop = app.add_subcommand("proportional", "positive-multiple test");
  prop->add_option("w1", w_path, "Hermitian operator file")->required();
  prop->add_option("w2", w2_path, "Hermitian operator file")->required();
  add_report_out(prop);

  CLI::App* joint = app.add_subcommand("joint", "simplex dichotomy over a witness family");
  joint->add_option("witnesses", family_paths, "two or more witness files")
      ->required()
      ->expected(-2);
  add_budget(joint);
  add_report_out(joint);

  CLI::App* optimal =
      app.add_subcommand("optimal", "span test, subtraction search, and structural checks");
  optimal->add_option("witness", w_path, "witness file")->required();
  add_budget(optimal);
  add_report_out(optimal);

  CLI::App* lambda_cmd =
      app.add_subcommand("lambda", "detection-strength ratio estimate for a finer pair");
  lambda_cmd->add_option("w1", w_path, "finer witness")->required();
  lambda_cmd->add_option("w2", w2_path, "coarser witness")->required();
  lambda_cmd->add_option("--samples", samples, "states sampled from the detection set")
      ->capture_default_str();
  add_budget(lambda_cmd);
  add_report_out(lambda_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  SeeSawOptions opts;
  opts.restarts = restarts;
  opts.max_sweeps = sweeps;
  opts.seed = seed;

  JsonNode report = JsonNode::object();
  report.set("command", echo_node(argc, argv));

  try {
    if (app.got_subcommand(gen)) {
      OperatorFile file = [&] {
        if (gen->got_subcommand(gen_bell)) {
          const std::map<std::string, witkit::zoo::BellLabel> labels{
              {"phi+", witkit::zoo::BellLabel::phi_plus},
              {"phi-", witkit::zoo::BellLabel::phi_minus},
              {"psi+", witkit::zoo::BellLabel::psi_plus},
              {"psi-", witkit::zoo::BellLabel::psi_minus}};
          const auto it = labels.find(bell_which);
          if (it == labels.end())
            throw std::invalid_argument("gen bell: --which must be one of phi+, phi-, psi+, psi-");
          return OperatorFile::from_pure(witkit::zoo::bell_state(it->second),
                                         {{"name", "bell " + bell_which}});
        }
        if (gen->got_subcommand(gen_swap))
          return OperatorFile::from_hermitian(witkit::zoo::swap_operator(swap_n),
                                              {{"name", "swap n=" + std::to_string(swap_n)}});
        if (gen->got_subcommand(gen_werner))
          return OperatorFile::from_density(
              witkit::zoo::werner_state(werner_p),
              {{"name", "werner p=" + witkit::io::format_double(werner_p)}});
        if (gen->got_subcommand(gen_ptw)) {
          const LoadedFile in = load(state_path);
          report.set("inputs", JsonNode::object().set("state", input_node(in)));
          return OperatorFile::from_hermitian(
              witkit::zoo::pt_witness(in.file.as_pure()),
              {{"name", "pt-witness"}, {"source_digest", in.digest}});
        }
        const BipartiteDims dims(d1, d2);
        const std::string tag = " seed=" + std::to_string(seed);
        if (gen->got_subcommand(gen_rdensity))
          return OperatorFile::from_density(witkit::zoo::random_density(dims, seed),
                                            {{"name", "random-density" + tag}});
        if (gen->got_subcommand(gen_rpure))
          return OperatorFile::from_pure(witkit::zoo::random_pure(dims, seed),
                                         {{"name", "random-pure" + tag}});
        return OperatorFile::from_pure(witkit::zoo::random_product(dims, seed).joint(),
                                       {{"name", "random-product" + tag}});
      }();

      const std::string bytes = witkit::io::serialize(file);
      witkit::io::write_file(gen_out, bytes);
      JsonNode result = JsonNode::object();
      result.set("written", gen_out);
      result.set("digest", witkit::io::hex_digest(bytes));
      result.set("kind", witkit::io::kind_name(file.kind()));
      result.set("dims", dims_node(file.dims()));
      report.set("result", std::move(result));
      return emit(report, report_out, 0);
    }

    if (app.got_subcommand(certify)) {
      const LoadedFile in = load(w_path);
      const witkit::WitnessCertificate cert = witkit::certify_witness(in.file.as_hermitian(), opts);
      report.set("inputs", JsonNode::object().set("witness", input_node(in)));
      report.set("budget", budget_node(opts));
      JsonNode result = JsonNode::object();
      result.set("verdict", verdict_name(cert.verdict));
      result.set("min_product", cert.min_product);
      result.set("min_product_arg", product_node(cert.min_product_arg));
      result.set("max_product", cert.max_product);
      result.set("max_product_arg", product_node(cert.max_product_arg));
      result.set("min_eigenvalue", cert.min_eigenvalue);
      result.set("min_eigenvector", vector_node(cert.min_eigenvector.amps()));
      report.set("result", std::move(result));
      return emit(report, report_out, 0);
    }

    if (app.got_subcommand(detect)) {
      const LoadedFile win = load(w_path);
      const LoadedFile rin = load(rho_path);
      const witkit::DetectionReport rep =
          witkit::detects(win.file.as_hermitian(), rin.file.as_density());
      report.set("inputs",
                 JsonNode::object().set("witness", input_node(win)).set("state", input_node(rin)));
      JsonNode result = JsonNode::object();
      result.set("margin", rep.margin);
      result.set("detected", rep.detected);
      report.set("result", std::move(result));
      return emit(report, report_out, 0);
    }

    if (app.got_subcommand(construct)) {
      const LoadedFile rin = load(rho_path);
      const DensityMatrix rho = rin.file.as_density();
      const HermitianOperator w = witkit::construct_witness(rho);
      const OperatorFile file = OperatorFile::from_hermitian(
          w, {{"name", "pt-construction"}, {"source_digest", rin.digest}});
      const std::string bytes = witkit::io::serialize(file);
      witkit::io::write_file(construct_out, bytes);
      const witkit::DetectionReport rep = witkit::detects(w, rho);
      report.set("inputs", JsonNode::object().set("state", input_node(rin)));
      JsonNode result = JsonNode::object();
      result.set("written", construct_out);
      result.set("digest", witkit::io::hex_digest(bytes));
      result.set("margin", rep.margin);
      result.set("detected", rep.detected);
      report.set("result", std::move(result));
      return emit(report, report_out, 0);
    }

    if (app.got_subcommand(finer_cmd)) {
      const LoadedFile in1 = load(w_path);
      const LoadedFile in2 = load(w2_path);
      const witkit::FinerVerdict fv =
          witkit::finer(in1.file.as_hermitian(), in2.file.as_hermitian(), opts);
      report.set("inputs",
                 JsonNode::object().set("w1", input_node(in1)).set("w2", input_node(in2)));
      report.set("budget", budget_node(opts));
      JsonNode result = JsonNode::object();
      result.set("finer", fv.finer);
      result.set("best_gap", fv.best_gap);
      if (fv.a) result.set("a", *fv.a);
      if (fv.feasible_interval) {
        JsonNode interval = JsonNode::array();
        interval.push(fv.feasible_interval->first);
        interval.push(fv.feasible_interval->second);
        result.set("feasible_interval", std::move(interval));
      }
      if (fv.shift) {
        result.set("shift", operator_node(*fv.shift));
        if (!shift_out.empty()) {
          witkit::io::save_operator(
              OperatorFile::from_hermitian(*fv.shift, {{"name", "finer shift"}}), shift_out);
          result.set("shift_written", shift_out);
        }
      }
      report.set("result", std::move(result));
      return emit(report, report_out, 0);
    }

    if (app.got_subcommand(prop)) {
      const LoadedFile in1 = load(w_path);
      const LoadedFile in2 = load(w2_path);
      const std::optional<double> a =
          witkit::proportional(in1.file.as_hermitian(), in2.file.as_hermitian());
      report.set("inputs",
                 JsonNode::object().set("w1", input_node(in1)).set("w2", input_node(in2)));
      JsonNode result = JsonNode::object();
      result.set("proportional", a.has_value());
      if (a) result.set("a", *a);
      report.set("result", std::move(result));
      return emit(report, report_out, 0);
    }

    if (app.got_subcommand(joint)) {
      std::vector<LoadedFile> ins;
      std::vector<HermitianOperator> family;
      ins.reserve(family_paths.size());
      family.reserve(family_paths.size());
      JsonNode inputs = JsonNode::array();
      for (const std::string& path : family_paths) {
        ins.push_back(load(path));
        family.push_back(ins.back().file.as_hermitian());
        inputs.push(input_node(ins.back()));
      }
      report.set("inputs", JsonNode::object().set("witnesses", std::move(inputs)));
      report.set("budget", budget_node(opts));
      const witkit::JointAnalysis an = witkit::joint_analysis(family, opts);
      JsonNode result = JsonNode::object();
      result.set("outcome", outcome_name(an.outcome));
      result.set("simplex_value", an.simplex_value);
      if (an.certificate) {
        JsonNode cert = JsonNode::object();
        cert.set("kind", simplex_kind_name(an.certificate->kind));
        JsonNode weights = JsonNode::array();
        for (Eigen::Index i = 0; i < an.certificate->weights.size(); ++i)
          weights.push(an.certificate->weights(i));
        cert.set("weights", std::move(weights));
        cert.set("min_eigenvalue", an.certificate->min_eigenvalue);
        cert.set("combined", operator_node(an.certificate->combined));
        result.set("certificate", std::move(cert));
      }
      if (an.detection) {
        JsonNode det = JsonNode::object();
        JsonNode margins = JsonNode::array();
        for (double m : an.detection->margins) margins.push(m);
        det.set("margins", std::move(margins));
        det.set("state", operator_node(an.detection->state.op()));
        result.set("detection", std::move(det));
      }
      report.set("result", std::move(result));
      const int code = an.outcome == witkit::JointOutcome::inconclusive ? 2 : 0;
      return emit(report, report_out, code);
    }

    if (app.got_subcommand(optimal)) {
      const LoadedFile in = load(w_path);
      const witkit::OptimalityReport rep =
          witkit::optimality_report(in.file.as_hermitian(), opts);
      report.set("inputs", JsonNode::object().set("witness", input_node(in)));
      report.set("budget", budget_node(opts));

      JsonNode zero = JsonNode::object();
      zero.set("count", static_cast<int>(rep.zero_set.vectors.size()));
      zero.set("span_rank", rep.zero_set.span_rank);
      JsonNode members = JsonNode::array();
      for (const ProductVector& pv : rep.zero_set.vectors) members.push(product_node(pv));
      zero.set("members", std::move(members));

      JsonNode refutations = JsonNode::array();
      for (const witkit::SubtractionRefutation& r : rep.refutations) {
        JsonNode one = JsonNode::object();
        one.set("amount", r.amount);
        one.set("subtracted", operator_node(r.subtracted));
        refutations.push(std::move(one));
      }

      JsonNode structure = JsonNode::object();
      structure.set("verdict", structure_name(rep.structure.verdict));
      structure.set("q_psd", rep.structure.q_psd);
      structure.set("range_overlap", rep.structure.range_overlap);
      structure.set("residual", rep.structure.residual);
      structure.set("details", rep.structure.details);

      JsonNode result = JsonNode::object();
      result.set("spans", rep.spans);
      result.set("zero_set", std::move(zero));
      result.set("refutations", std::move(refutations));
      result.set("structure", std::move(structure));
      result.set("details", rep.details);
      report.set("result", std::move(result));

      const bool inconclusive = !rep.spans && rep.refutations.empty() &&
                                rep.structure.verdict == witkit::StructureVerdict::inconclusive;
      return emit(report, report_out, inconclusive ? 2 : 0);
    }

    if (app.got_subcommand(lambda_cmd)) {
      const LoadedFile in1 = load(w_path);
      const LoadedFile in2 = load(w2_path);
      const witkit::LambdaEstimate est =
          witkit::estimate_lambda(in1.file.as_hermitian(), in2.file.as_hermitian(), samples, opts);
      report.set("inputs",
                 JsonNode::object().set("w1", input_node(in1)).set("w2", input_node(in2)));
      JsonNode budget = budget_node(opts);
      budget.set("samples", samples);
      report.set("budget", std::move(budget));
      JsonNode result = JsonNode::object();
      result.set("upper_estimate", est.upper_estimate);
      result.set("lower_bound", est.lower_bound);
      result.set("a_max", est.a_max);
      result.set("samples_used", est.samples_used);
      report.set("result", std::move(result));
      return emit(report, report_out, 0);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::cerr << "error: no command dispatched\n";
  return 1;
}
