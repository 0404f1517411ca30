#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rwspt/ctmc.hpp"
#include "rwspt/errors.hpp"
#include "rwspt/models.hpp"
#include "rwspt/netio.hpp"
#include "rwspt/rewriting.hpp"
#include "rwspt/statespace.hpp"
#include "rwspt/symmetry.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 verification/analysis failure, 2 usage error,
// 3 resource-limit abort.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelOptions {
    std::string model = "nplsys";
    std::string params;
    std::size_t limit = 5'000'000;
    double wallBudget = 0;
    int threads = 1;
    std::string outDir = "out";
    bool force = false;
};

struct TimesSpec {
    double t0 = 0;
    double t1 = 0;
    std::size_t count = 0;
    bool geometric = false;
};

int defaultThreads() {
    const char* env = std::getenv("RWSPT_THREADS");
    if (!env) return 1;
    int value = 0;
    const std::string text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 1)
        throw UsageError("RWSPT_THREADS must be a positive integer, got '" + text + "'");
    return value;
}

void addModelFlags(CLI::App* cmd, ModelOptions& o) {
    cmd->add_option("--model", o.model,
                    "Model: 'nplsys', a .rwspt net file, or a key=value config file")
        ->capture_default_str();
    cmd->add_option("--params", o.params, "Model parameters, e.g. N=2,K=2,M=2,load=0.5");
    cmd->add_option("--limit", o.limit, "Abort exploration beyond this many states (0 = unlimited)")
        ->capture_default_str();
    cmd->add_option("--wall-budget", o.wallBudget, "Abort exploration after this many seconds")
        ->capture_default_str();
    cmd->add_option("--threads", o.threads, "Worker threads (default: $RWSPT_THREADS or 1)");
    cmd->add_option("--out", o.outDir, "Output directory")->capture_default_str();
    cmd->add_flag("--force", o.force, "Overwrite existing output files");
}

struct LoadedModel {
    rwspt::System initial;
    std::vector<rwspt::Rule> rules;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedModel loadModel(const ModelOptions& o) {
    if (o.model == "nplsys") {
        const rwspt::PLConfig cfg =
            o.params.empty() ? rwspt::PLConfig{} : rwspt::parsePLConfig(o.params);
        return {rwspt::buildNPLsys(cfg), rwspt::degradationRules(cfg)};
    }
    if (fs::path(o.model).extension() == ".rwspt") {
        // A plain net file: transition firing only, no rewrite rules.
        rwspt::NetDocument doc = rwspt::parseNet(readFile(o.model));
        if (!doc.initialMarking)
            throw rwspt::ValidationError("model file '" + o.model +
                                         "' has no initial marking; add 'm0 = ...'");
        return {rwspt::System(std::move(doc.net), std::move(*doc.initialMarking)),
                {rwspt::firingRule()}};
    }
    // Config file for the production-line family; --params entries win.
    std::string text = readFile(o.model);
    if (!o.params.empty()) text += "\n" + o.params;
    const rwspt::PLConfig cfg = rwspt::parsePLConfig(text);
    return {rwspt::buildNPLsys(cfg), rwspt::degradationRules(cfg)};
}

rwspt::ExploreOptions exploreOptions(const ModelOptions& o) {
    rwspt::ExploreOptions eo;
    eo.stateLimit = o.limit;
    eo.wallBudgetSec = o.wallBudget;
    eo.threads = o.threads;
    return eo;
}

fs::path outputPath(const ModelOptions& o, const std::string& name) {
    fs::create_directories(o.outDir);
    fs::path p = fs::path(o.outDir) / name;
    if (fs::exists(p) && !o.force)
        throw UsageError("'" + p.string() + "' exists; pass --force to overwrite");
    return p;
}

void writeArtifact(const ModelOptions& o, const std::string& name,
                   const std::function<void(std::ostream&)>& emit) {
    const fs::path p = outputPath(o, name);
    std::ofstream os(p, std::ios::binary);
    if (!os) throw UsageError("cannot write '" + p.string() + "'");
    emit(os);
    os.flush();
    if (!os) throw UsageError("write to '" + p.string() + "' failed");
    std::cout << "wrote " << p.string() << "\n";
}

void printCounts(const rwspt::TransitionSystem& ts) {
    std::cout << "states: " << ts.states.size() << " (final: " << ts.finalCount() << ")\n";
}

TimesSpec parseTimes(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() != 3 && parts.size() != 4)
        throw UsageError("--times expects t0:t1:count[:geom], got '" + text + "'");

    TimesSpec spec;
    const auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError("bad number '" + s + "' in --times '" + text + "'");
    };
    spec.t0 = number(parts[0]);
    spec.t1 = number(parts[1]);
    const double rawCount = number(parts[2]);
    spec.count = static_cast<std::size_t>(rawCount);
    if (rawCount < 1 || static_cast<double>(spec.count) != rawCount)
        throw UsageError("--times count must be a positive integer, got '" + parts[2] + "'");
    if (parts.size() == 4) {
        if (parts[3] != "geom")
            throw UsageError("--times spacing must be 'geom', got '" + parts[3] + "'");
        spec.geometric = true;
    }
    return spec;
}

std::vector<double> gridFor(const TimesSpec& spec) {
    try {
        return rwspt::timeGrid(spec.t0, spec.t1, spec.count, spec.geometric);
    } catch (const rwspt::ValidationError& e) {
        throw UsageError(e.what());
    }
}

int runReach(const ModelOptions& o) {
    const LoadedModel lm = loadModel(o);
    const rwspt::TransitionSystem ts = rwspt::buildOrdinary(lm.initial, lm.rules, exploreOptions(o));
    printCounts(ts);
    writeArtifact(o, "states.csv", [&](std::ostream& os) { rwspt::writeStatesCsv(os, ts); });
    writeArtifact(o, "edges.csv", [&](std::ostream& os) { rwspt::writeEdgesCsv(os, ts); });
    writeArtifact(o, "ts.dot", [&](std::ostream& os) { os << rwspt::exportDot(ts); });
    return 0;
}

int runQuotient(const ModelOptions& o) {
    const LoadedModel lm = loadModel(o);
    const rwspt::QuotientResult q = rwspt::buildQuotient(lm.initial, lm.rules, exploreOptions(o));
    printCounts(q.ts);
    writeArtifact(o, "states.csv", [&](std::ostream& os) { rwspt::writeStatesCsv(os, q.ts); });
    writeArtifact(o, "edges.csv", [&](std::ostream& os) { rwspt::writeEdgesCsv(os, q.ts); });
    writeArtifact(o, "generator.csv",
                  [&](std::ostream& os) { rwspt::writeGeneratorCsv(os, q.chain); });
    return 0;
}

int runVerifyLump(const ModelOptions& o) {
    const LoadedModel lm = loadModel(o);
    const rwspt::TransitionSystem ordinary =
        rwspt::buildOrdinary(lm.initial, lm.rules, exploreOptions(o));
    const rwspt::QuotientResult q = rwspt::buildQuotient(lm.initial, lm.rules, exploreOptions(o));
    std::cout << "ordinary states: " << ordinary.states.size() << ", quotient states: " << q.ts.states.size()
              << "\n";
    const rwspt::LumpingReport report = rwspt::verifyLumping(ordinary, q.chain);
    if (report.ok()) {
        std::cout << "lumping ok: " << report.statesChecked << " states checked\n";
        return 0;
    }
    std::cerr << "lumping violated: " << report.violations.size() << " violation(s)\n";
    const std::size_t shown = std::min<std::size_t>(report.violations.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
        const rwspt::LumpingViolation& v = report.violations[i];
        std::cerr << "  state " << v.ordinaryState << " (class " << v.fromClass << ") -> class "
                  << v.toClass << ": rate " << rwspt::doubleText(v.ordinaryRate)
                  << ", generator says " << rwspt::doubleText(v.quotientRate) << "\n";
    }
    if (shown < report.violations.size())
        std::cerr << "  ... " << (report.violations.size() - shown) << " more\n";
    return 1;
}

int runCtmc(const ModelOptions& o, const std::string& measure, const std::string& times,
            double epsilon, const std::string& labels) {
    if (!(epsilon > 0 && epsilon < 1))
        throw UsageError("--epsilon must lie in (0, 1)");
    const std::vector<double> grid = gridFor(parseTimes(times));

    const LoadedModel lm = loadModel(o);
    const rwspt::QuotientResult q = rwspt::buildQuotient(lm.initial, lm.rules, exploreOptions(o));
    printCounts(q.ts);

    if (measure == "reliability") {
        const rwspt::Curve curve = rwspt::reliability(q.chain, grid, epsilon, o.threads);
        writeArtifact(o, "reliability.csv",
                      [&](std::ostream& os) { rwspt::writeCurveCsv(os, curve); });
    } else if (measure == "throughput") {
        std::set<std::string> wanted;
        std::size_t pos = 0;
        while (pos <= labels.size() && !labels.empty()) {
            const std::size_t comma = labels.find(',', pos);
            const std::string item = labels.substr(pos, comma - pos);
            if (!item.empty()) wanted.insert(item);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        const auto filter = [&wanted](const std::string& label) {
            return wanted.empty() || wanted.count(label) > 0;
        };
        const rwspt::Curve curve = rwspt::throughput(q.chain, filter, grid, epsilon, o.threads);
        writeArtifact(o, "throughput.csv",
                      [&](std::ostream& os) { rwspt::writeCurveCsv(os, curve); });
    } else if (measure == "transient") {
        const rwspt::TransientResult r = rwspt::transient(q.chain, grid, epsilon, o.threads);
        writeArtifact(o, "transient.csv",
                      [&](std::ostream& os) { rwspt::writeTransientCsv(os, r); });
    } else {
        throw UsageError("--measure must be reliability, throughput, or transient");
    }
    return 0;
}

int runExportDot(const ModelOptions& o, bool quotient) {
    const LoadedModel lm = loadModel(o);
    rwspt::TransitionSystem ts;
    if (quotient) ts = rwspt::buildQuotient(lm.initial, lm.rules, exploreOptions(o)).ts;
    else ts = rwspt::buildOrdinary(lm.initial, lm.rules, exploreOptions(o));
    printCounts(ts);
    writeArtifact(o, "ts.dot", [&](std::ostream& os) { os << rwspt::exportDot(ts); });
    return 0;
}

int runParse(const std::string& file, bool echo) {
    const rwspt::NetDocument doc = rwspt::parseNet(readFile(file));
    std::cout << "parsed " << file << ": " << doc.net.transitions().size() << " transition(s), "
              << doc.net.places().size() << " place(s), "
              << (doc.initialMarking ? "with" : "no") << " initial marking\n";
    if (echo) std::cout << rwspt::serialize(doc);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rewritable stochastic Petri nets: state spaces, symmetry quotients, CTMC analysis"};
    app.require_subcommand(1);

    ModelOptions opts;
    std::string measure = "reliability";
    std::string times;
    double epsilon = 1e-10;
    std::string labels;
    bool wantQuotientDot = false;
    std::string parseFile;
    bool parseEcho = false;

    CLI::App* reach = app.add_subcommand("reach", "Build the ordinary transition system");
    addModelFlags(reach, opts);

    CLI::App* quotient =
        app.add_subcommand("quotient", "Build the symmetry quotient and its lumped generator");
    addModelFlags(quotient, opts);

    CLI::App* verifyLump =
        app.add_subcommand("verify-lump", "Cross-check the lumped generator against the ordinary graph");
    addModelFlags(verifyLump, opts);

    CLI::App* ctmc = app.add_subcommand("ctmc", "Transient analysis of the lumped chain");
    addModelFlags(ctmc, opts);
    ctmc->add_option("--measure", measure, "reliability, throughput, or transient")
        ->capture_default_str();
    ctmc->add_option("--times", times, "Time grid t0:t1:count[:geom]")->required();
    ctmc->add_option("--epsilon", epsilon, "Poisson truncation tail bound")->capture_default_str();
    ctmc->add_option("--labels", labels, "Comma-separated edge labels counted by --measure throughput");

    CLI::App* exportDot = app.add_subcommand("export-dot", "Emit the transition system as DOT");
    addModelFlags(exportDot, opts);
    exportDot->add_flag("--quotient", wantQuotientDot, "Export the quotient instead of the ordinary graph");

    CLI::App* parseCmd = app.add_subcommand("parse", "Syntax-check a .rwspt net file");
    parseCmd->add_option("file", parseFile, "Net file to check")->required();
    parseCmd->add_flag("--echo", parseEcho, "Print the parsed document re-serialized");

    try {
        opts.threads = defaultThreads();
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 2; // help/version exit 0, any flag misuse exits 2
        }

        if (reach->parsed()) return runReach(opts);
        if (quotient->parsed()) return runQuotient(opts);
        if (verifyLump->parsed()) return runVerifyLump(opts);
        if (ctmc->parsed()) return runCtmc(opts, measure, times, epsilon, labels);
        if (exportDot->parsed()) return runExportDot(opts, wantQuotientDot);
        if (parseCmd->parsed()) return runParse(parseFile, parseEcho);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rwspt::StateLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
