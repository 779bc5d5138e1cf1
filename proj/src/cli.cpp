#include "phc/cli.hpp"

#include "phc/boundedness.hpp"
#include "phc/core.hpp"
#include "phc/errors.hpp"
#include "phc/extremal.hpp"
#include "phc/io.hpp"
#include "phc/journal.hpp"
#include "phc/oracle.hpp"
#include "phc/pipeline.hpp"
#include "phc/rainbow.hpp"
#include "phc/rng.hpp"
#include "phc/schedule.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace phc {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;   // structured domain failure
constexpr int exit_parse = 2;     // bad file or configuration
constexpr int exit_budget = 3;

DeltaVec parse_delta_list(const std::string& s) {
    DeltaVec dv;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) dv.deltas.push_back(parse_rational(item));
    dv.validate();
    return dv;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct Ctx {
    std::ostream& out;
    std::ostream& err;
    JournalRecord rec;
    std::string journal_path;

    std::string format = "text";
    std::uint64_t seed = 0;
    std::uint64_t node_budget = 0;
    int retries = 50;

    bool structured() const { return format == "structured"; }
    Budget budget() const { return Budget{node_budget, 0}; }
};

void add_common_flags(CLI::App* cmd, Ctx& ctx, bool randomized) {
    cmd->add_option("--format", ctx.format, "output format: text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--journal", ctx.journal_path, "journal file path");
    cmd->add_option("--node-budget", ctx.node_budget, "search step limit, 0 = unlimited");
    if (randomized) {
        cmd->add_option("--seed", ctx.seed, "RNG seed (default: random, recorded)");
        cmd->add_option("--retries", ctx.retries, "max sampling attempts");
    }
}

int cmd_verify(Ctx& ctx, const std::string& col_path, const std::string& box_path,
               const std::string& witness_path) {
    Colouring col = load_colouring(col_path);
    if (!box_path.empty()) {
        SubBox box = load_box(box_path);
        validate_box(col.grid, box);
        std::vector<JSet> js = classify_box(col, box);
        for (JSet j : js) ctx.out << "canonical J=" << jset_name(j, col.grid.k) << '\n';
        ctx.out << "verdict canonical=" << (js.empty() ? "false" : "true") << '\n';
        ctx.rec.add("outcome", js.empty() ? "not-canonical" : "canonical");
        if (!js.empty()) ctx.rec.add("least_J", jset_name(js.front(), col.grid.k));
        return js.empty() ? exit_failure : exit_ok;
    }
    CanonicalWitness w = load_witness(witness_path);
    bool ok = verify_witness(col, w);
    ctx.out << "verdict witness=" << (ok ? "valid" : "invalid") << '\n';
    ctx.rec.add("outcome", ok ? "valid" : "invalid");
    return ok ? exit_ok : exit_failure;
}

int cmd_classify(Ctx& ctx, const std::string& col_path, const std::string& delta) {
    Colouring col = load_colouring(col_path);
    DeltaVec dv = parse_delta_list(delta);
    BoundednessReport rep = is_bounded(col, dv);
    write_boundedness_report(rep, ctx.structured(), ctx.out);
    ctx.rec.add("outcome", rep.bounded() ? "bounded" : "unbounded");
    if (rep.j_star) {
        ctx.rec.add("jstar", *rep.j_star);
        ctx.rec.add("Jstar", jset_name(*rep.j_star_witness, col.grid.k));
    }
    return exit_ok;
}

int cmd_census(Ctx& ctx, const std::string& col_path, const std::string& j_spec,
               const std::string& delta) {
    Colouring col = load_colouring(col_path);
    ConflictCensus census = conflict_census(col);
    write_census(census, ctx.structured(), ctx.out);
    ctx.rec.add("outcome", "ok");
    int code = exit_ok;
    if (!j_spec.empty()) {
        if (delta.empty()) throw std::invalid_argument("--j needs --delta");
        auto j = parse_jset(j_spec, col.grid.k);
        if (!j) throw std::invalid_argument("bad J spec: " + j_spec);
        BoundVerdict v = check_bddJ_bound(col, *j, parse_rational(delta));
        const char* name = v == BoundVerdict::holds   ? "holds"
                           : v == BoundVerdict::fails ? "fails"
                                                      : "inapplicable";
        ctx.out << "bound J=" << jset_name(*j, col.grid.k) << " verdict=" << name << '\n';
        ctx.rec.add("bound", name);
        if (v == BoundVerdict::fails) code = exit_failure;
    }
    return code;
}

int cmd_extract(Ctx& ctx, const std::string& h_path, const std::string& t_spec,
                const std::string& mode_name, bool count, const std::string& out_path) {
    ExtremalInstance inst{load_hypergraph(h_path), parse_int_list(t_spec)};
    inst.validate();
    AssumptionReport rep = assumption_holds(inst);
    ctx.out << "assumption holds=" << (rep.holds ? "true" : "false");
    if (!rep.diagnostic.empty()) ctx.out << " note=\"" << rep.diagnostic << "\"";
    ctx.out << '\n';
    ctx.rec.add("assumption", rep.holds ? "true" : "false");

    Budget budget = ctx.budget();
    if (count) {
        BigInt boxes = count_complete_boxes(inst, budget);
        BigRat lb = count_lower_bound(inst);
        ctx.out << "count boxes=" << boxes.str() << " lower_bound=" << format_rational(lb)
                << '\n';
        ctx.rec.add("boxes", boxes.str());
    }
    ExtractMode mode =
        mode_name == "exhaustive" ? ExtractMode::exhaustive : ExtractMode::proof_guided;
    std::optional<SubBox> box = extract_complete_box(inst, mode, budget);
    ctx.rec.add("nodes", budget.used);
    if (!box) {
        ctx.out << "outcome box=none\n";
        ctx.rec.add("outcome", "none");
        return exit_failure;
    }
    serialize_box(*box, ctx.out);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        serialize_box(*box, f);
    }
    ctx.rec.add("outcome", "box");
    return exit_ok;
}

int cmd_rainbow(Ctx& ctx, const std::string& col_path, int t, const std::string& delta,
                const std::string& out_path) {
    Colouring col = load_colouring(col_path);
    DeltaVec dv = parse_delta_list(delta);
    SampleOutcome so = sample_rainbow_box(col, dv, t, ctx.seed, ctx.retries);
    if (!so.feasible) ctx.out << "advisory \"" << so.note << "\"\n";
    ctx.rec.add("attempts", static_cast<std::uint64_t>(so.attempts));
    if (!so.result) {
        ctx.out << "outcome box=none attempts=" << so.attempts << '\n';
        ctx.rec.add("outcome", "none");
        return exit_failure;
    }
    write_diagnostics(so.result->diag, col.grid.k, ctx.structured(), ctx.out);
    serialize_box(so.result->box, ctx.out);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        serialize_box(so.result->box, f);
    }
    ctx.rec.add("outcome", "box");
    return exit_ok;
}

int cmd_rainbow_dense(Ctx& ctx, const std::string& h_path, const std::string& col_path, int m,
                      const std::string& delta, const std::string& out_path) {
    PartiteHypergraph h = load_hypergraph(h_path);
    Colouring col = load_colouring(col_path);
    std::optional<DeltaVec> dv;
    if (!delta.empty()) dv = parse_delta_list(delta);
    SampleOutcome so = sample_rainbow_dense(h, col, m, ctx.seed, ctx.retries,
                                            dv ? &*dv : nullptr);
    if (!so.feasible) ctx.out << "advisory \"" << so.note << "\"\n";
    ctx.rec.add("attempts", static_cast<std::uint64_t>(so.attempts));
    if (!so.result) {
        ctx.out << "outcome box=none attempts=" << so.attempts << '\n';
        ctx.rec.add("outcome", "none");
        return exit_failure;
    }
    write_diagnostics(so.result->diag, col.grid.k, ctx.structured(), ctx.out);
    ctx.out << "surviving_edges " << so.result->surviving_edges.size() << '\n';
    serialize_box(so.result->box, ctx.out);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        serialize_box(so.result->box, f);
    }
    ctx.rec.add("outcome", "box");
    return exit_ok;
}

int cmd_pipeline(Ctx& ctx, const std::string& col_path, int t, const std::string& delta,
                 const std::string& out_path) {
    Colouring col = load_colouring(col_path);
    DeltaVec dv = parse_delta_list(delta);
    Budget budget = ctx.budget();
    PipelineOutcome po = find_canonical_copy(col, t, dv, ctx.seed, budget, ctx.retries);
    write_trace(po, ctx.out);
    ctx.rec.add("branch", po.trace.branch);
    ctx.rec.add("nodes", budget.used);
    if (po.witness) {
        serialize_witness(*po.witness, ctx.out);
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            serialize_witness(*po.witness, f);
        }
        ctx.rec.add("outcome", "witness");
        ctx.rec.add("J", jset_name(po.witness->j_set, col.grid.k));
        return exit_ok;
    }
    ctx.rec.add("outcome", po.failure->budget ? "budget" : "failure");
    ctx.rec.add("step", po.failure->step);
    return po.failure->budget ? exit_budget : exit_failure;
}

int cmd_schedule(Ctx& ctx, int k, long long t, const std::string& variant_spec,
                 long long scan_max, bool stop_first) {
    auto variant = parse_variant(variant_spec);
    if (!variant) throw std::invalid_argument("unknown variant: " + variant_spec);
    int code = exit_ok;
    if (t > 0) {
        Schedule s = build_schedule(k, t, *variant);
        ctx.out << "schedule k=" << k << " t=" << t << " variant=" << variant_name(*variant)
                << '\n';
        ctx.out << "const c=" << format_monomial(s.c) << '\n';
        for (int j = 0; j < k; ++j)
            ctx.out << "const delta[" << j << "]=" << format_monomial(s.delta[j]) << '\n';
        for (int j = 2; j < k; ++j)
            ctx.out << "const m[" << j << "]=" << format_monomial(s.m[j]) << '\n';
        ctx.out << "const n=" << format_monomial(s.n) << '\n';
        InequalityReport rep = verify_inequalities(s, stop_first);
        write_inequality_report(rep, ctx.structured(), ctx.out);
        ctx.rec.add("schedule_valid", rep.all_hold() ? "true" : "false");
        if (!rep.all_hold()) code = exit_failure;
    }
    if (scan_max > 0) {
        auto t_star = minimal_valid_t(k, *variant, scan_max);
        if (t_star)
            ctx.out << "minimal_t " << *t_star << '\n';
        else
            ctx.out << "minimal_t none max=" << scan_max << '\n';
        ctx.rec.add("minimal_t", t_star ? std::to_string(*t_star) : "none");
    }
    ctx.rec.add("outcome", code == exit_ok ? "ok" : "invalid");
    return code;
}

int cmd_er_search(Ctx& ctx, int k, int t, int n, int n_max, bool no_prune,
                  std::uint64_t checkpoint_interval) {
    Budget budget = ctx.budget();
    SearchOptions opts;
    opts.prune = !no_prune;
    std::ofstream journal_stream;
    if (checkpoint_interval > 0 && !ctx.journal_path.empty()) {
        journal_stream.open(ctx.journal_path, std::ios::app);
        opts.journal = &journal_stream;
        opts.checkpoint_interval = checkpoint_interval;
    }
    if (n > 0) {
        SearchStats stats;
        std::optional<Colouring> avoider = avoider_search(k, t, n, budget, opts, &stats);
        ctx.out << "search k=" << k << " t=" << t << " n=" << n << " nodes=" << stats.nodes
                << " leaves=" << stats.leaves << " pruned=" << stats.pruned << '\n';
        ctx.rec.add("nodes", stats.nodes);
        ctx.rec.add("leaves", stats.leaves);
        if (avoider) {
            ctx.out << "outcome avoider=found\n";
            serialize_colouring(*avoider, ctx.out);
            ctx.rec.add("outcome", "avoider");
        } else {
            ctx.out << "outcome avoider=none\n";
            ctx.rec.add("outcome", "exhausted");
        }
        return exit_ok;
    }
    ErScan scan = er_scan(k, t, n_max, budget, opts);
    for (auto [nn, exists] : scan.avoider_at)
        ctx.out << "scan n=" << nn << " avoider=" << (exists ? "true" : "false") << '\n';
    ctx.rec.add("nodes", budget.used);
    if (scan.budget_hit) {
        ctx.out << "outcome er=budget-exceeded\n";
        ctx.rec.add("outcome", "budget");
        return exit_budget;
    }
    if (scan.value) {
        ctx.out << "outcome er=" << *scan.value
                << " confirmed_next=" << (scan.confirmed_next ? "true" : "false") << '\n';
        ctx.rec.add("outcome", "er");
        ctx.rec.add("er", *scan.value);
    } else {
        ctx.out << "outcome er=none n_max=" << n_max << '\n';
        ctx.rec.add("outcome", "none");
    }
    return exit_ok;
}

int cmd_random_lb(Ctx& ctx, int k, int t, int n, int palette, std::uint64_t trials) {
    ExperimentRecord rec = random_lb_experiment(k, t, n, palette, trials, ctx.seed);
    write_experiment(rec, ctx.out);
    ctx.rec.add("hits", rec.hits);
    ctx.rec.add("misses", rec.misses);
    ctx.rec.add("hit_rate", rec.hit_rate());
    ctx.rec.add("outcome", "ok");
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Ctx ctx{out, err, {}, {}};
    if (const char* env = std::getenv("PHC_JOURNAL")) ctx.journal_path = env;
    ctx.seed = random_seed();

    CLI::App app{"canonical Ramsey toolkit for partite hypergraphs"};
    app.require_subcommand(1);

    std::string col_path, box_path, witness_path, h_path, delta, j_spec, t_spec;
    std::string mode_name = "proof-guided", variant_spec = "general", out_path;
    int t = 2, k = 2, n = 0, n_max = 0, m = 0, palette = 1;
    long long t_ll = 0, scan_max = 0;
    std::uint64_t trials = 1000, checkpoint_interval = 0;
    bool count = false, stop_first = false, no_prune = false;

    CLI::App* c_verify = app.add_subcommand("verify", "canonicity of a box or witness");
    c_verify->add_option("--colouring", col_path)->required();
    auto* vb = c_verify->add_option("--box", box_path);
    auto* vw = c_verify->add_option("--witness", witness_path);
    vb->excludes(vw);
    add_common_flags(c_verify, ctx, false);

    CLI::App* c_classify = app.add_subcommand("classify", "boundedness report");
    c_classify->add_option("--colouring", col_path)->required();
    c_classify->add_option("--delta", delta, "comma list d0,d1,...")->required();
    add_common_flags(c_classify, ctx, false);

    CLI::App* c_census = app.add_subcommand("census", "conflict census by agreement set");
    c_census->add_option("--colouring", col_path)->required();
    c_census->add_option("--j", j_spec, "agreement set, e.g. {1,2}");
    c_census->add_option("--delta", delta, "single delta for the bound check");
    add_common_flags(c_census, ctx, false);

    CLI::App* c_extract = app.add_subcommand("extract", "complete box extraction");
    c_extract->add_option("--hypergraph", h_path)->required();
    c_extract->add_option("--t", t_spec, "box dimensions t1,...,tk")->required();
    c_extract->add_option("--mode", mode_name)
        ->check(CLI::IsMember({"proof-guided", "exhaustive"}));
    c_extract->add_flag("--count", count, "also count boxes against the lower bound");
    c_extract->add_option("--out", out_path, "write the box to a file");
    add_common_flags(c_extract, ctx, false);

    CLI::App* c_rainbow = app.add_subcommand("rainbow", "rainbow box sampling");
    c_rainbow->add_option("--colouring", col_path)->required();
    c_rainbow->add_option("--t", t)->required();
    c_rainbow->add_option("--delta", delta)->required();
    c_rainbow->add_option("--out", out_path);
    add_common_flags(c_rainbow, ctx, true);

    CLI::App* c_dense = app.add_subcommand("rainbow-dense", "dense rainbow sampling");
    c_dense->add_option("--hypergraph", h_path)->required();
    c_dense->add_option("--colouring", col_path)->required();
    c_dense->add_option("--m", m)->required();
    c_dense->add_option("--delta", delta);
    c_dense->add_option("--out", out_path);
    add_common_flags(c_dense, ctx, true);

    CLI::App* c_pipeline = app.add_subcommand("pipeline", "canonical copy search");
    c_pipeline->add_option("--colouring", col_path)->required();
    c_pipeline->add_option("--t", t)->required();
    c_pipeline->add_option("--delta", delta)->required();
    c_pipeline->add_option("--out", out_path);
    add_common_flags(c_pipeline, ctx, true);

    CLI::App* c_schedule = app.add_subcommand("schedule", "parameter schedule certification");
    c_schedule->add_option("--k", k)->required();
    c_schedule->add_option("--t", t_ll);
    c_schedule->add_option("--variant", variant_spec);
    c_schedule->add_option("--scan-max", scan_max, "scan t=2..max for the least valid t");
    c_schedule->add_flag("--stop-first", stop_first, "stop at the first failing inequality");
    add_common_flags(c_schedule, ctx, false);

    CLI::App* c_er = app.add_subcommand("er-search", "avoider search / ER number scan");
    c_er->add_option("--k", k)->required();
    c_er->add_option("--t", t)->required();
    auto* en = c_er->add_option("--n", n, "search a single n");
    auto* em = c_er->add_option("--n-max", n_max, "scan n=1..max");
    en->excludes(em);
    c_er->add_flag("--no-prune", no_prune);
    c_er->add_option("--checkpoint-interval", checkpoint_interval);
    add_common_flags(c_er, ctx, false);

    CLI::App* c_lb = app.add_subcommand("random-lb", "random colouring hit-rate experiment");
    c_lb->add_option("--k", k)->required();
    c_lb->add_option("--t", t)->required();
    c_lb->add_option("--n", n)->required();
    c_lb->add_option("--palette", palette)->required();
    c_lb->add_option("--trials", trials);
    add_common_flags(c_lb, ctx, true);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << '\n';
        JournalRecord rec;
        rec.add("command", args.empty() ? std::string("none") : args.front());
        rec.add("outcome", "config-error");
        rec.add("error", e.what());
        append_journal(ctx.journal_path, rec);
        return exit_parse;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    ctx.rec.add("command", name);
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--journal") {
            ++i;
            continue;
        }
        ctx.rec.add("arg", args[i]);
    }
    const bool randomized =
        sub == c_rainbow || sub == c_dense || sub == c_pipeline || sub == c_lb;
    if (randomized) ctx.rec.add("seed", ctx.seed);

    auto start = std::chrono::steady_clock::now();
    int code = exit_ok;
    try {
        if (sub == c_verify) {
            if (box_path.empty() == witness_path.empty())
                throw std::invalid_argument("verify needs exactly one of --box, --witness");
            code = cmd_verify(ctx, col_path, box_path, witness_path);
        } else if (sub == c_classify) {
            code = cmd_classify(ctx, col_path, delta);
        } else if (sub == c_census) {
            code = cmd_census(ctx, col_path, j_spec, delta);
        } else if (sub == c_extract) {
            code = cmd_extract(ctx, h_path, t_spec, mode_name, count, out_path);
        } else if (sub == c_rainbow) {
            code = cmd_rainbow(ctx, col_path, t, delta, out_path);
        } else if (sub == c_dense) {
            code = cmd_rainbow_dense(ctx, h_path, col_path, m, delta, out_path);
        } else if (sub == c_pipeline) {
            code = cmd_pipeline(ctx, col_path, t, delta, out_path);
        } else if (sub == c_schedule) {
            if (t_ll <= 0 && scan_max <= 0)
                throw std::invalid_argument("schedule needs --t or --scan-max");
            code = cmd_schedule(ctx, k, t_ll, variant_spec, scan_max, stop_first);
        } else if (sub == c_er) {
            if (n <= 0 && n_max <= 0)
                throw std::invalid_argument("er-search needs --n or --n-max");
            code = cmd_er_search(ctx, k, t, n, n_max, no_prune, checkpoint_interval);
        } else if (sub == c_lb) {
            code = cmd_random_lb(ctx, k, t, n, palette, trials);
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        ctx.rec.add("outcome", "parse-error");
        ctx.rec.add("error", e.what());
        code = exit_parse;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        ctx.rec.add("outcome", "budget");
        ctx.rec.add("error", e.what());
        code = exit_budget;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        ctx.rec.add("outcome", "config-error");
        ctx.rec.add("error", e.what());
        code = exit_parse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        ctx.rec.add("outcome", "error");
        ctx.rec.add("error", e.what());
        code = exit_failure;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    ctx.rec.add("exit", code);
    ctx.rec.add("wall_ms", static_cast<std::int64_t>(ms));
    if (!append_journal(ctx.journal_path, ctx.rec))
        err << "warning: could not append journal at " << ctx.journal_path << '\n';
    return code;
}

} // namespace phc
