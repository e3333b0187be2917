#include "podium/cli.hpp"

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "podium/error.hpp"
#include "podium/net.hpp"
#include "podium/polishing.hpp"

namespace podium::cli {

namespace {

std::atomic<bool> g_signalled{false};

extern "C" void on_signal(int) { g_signalled = true; }

std::optional<std::string> read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> lines_of(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        out.push_back(line);
    }
    return out;
}

struct Manifest {
    std::vector<std::string> thumbnails;
    std::vector<std::string> notes;
};

std::optional<Manifest> read_manifest(const std::string& path, std::ostream& err)
{
    const auto text = read_file(path);
    if (!text) {
        err << "error: cannot read slides manifest '" << path << "'\n";
        return std::nullopt;
    }
    Manifest m;
    for (const auto& line : lines_of(*text)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto tab = line.find('\t');
        m.thumbnails.push_back(trim(line.substr(0, tab)));
        m.notes.push_back(tab == std::string::npos ? "" : trim(line.substr(tab + 1)));
    }
    return m;
}

std::optional<std::set<Factor>> parse_factors(const std::string& list, std::ostream& err)
{
    std::set<Factor> out;
    std::istringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        const auto f = factor_from_alias(item);
        if (!f) {
            err << "error: unknown factor '" << item << "'\n";
            return std::nullopt;
        }
        out.insert(*f);
    }
    return out;
}

std::string fixed(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::vector<std::string> split_manuscript(std::string_view text)
{
    std::vector<std::string> slides(1);
    for (const auto& line : lines_of(text)) {
        if (trim(line) == "---") {
            slides.emplace_back();
        } else {
            slides.back() += line + "\n";
        }
    }
    for (auto& s : slides) {
        s = trim(s);
    }
    return slides;
}

std::vector<TranscriptEvent> parse_transcript(std::string_view text)
{
    std::vector<TranscriptEvent> events;
    std::size_t n = 0;
    std::int64_t last = 0;
    for (const auto& line : lines_of(text)) {
        ++n;
        if (trim(line).empty()) {
            continue;
        }
        auto bad = [&](const std::string& why) {
            throw Error(ErrorCode::MalformedTranscript,
                        "transcript line " + std::to_string(n) + ": " + why);
        };
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            bad("expected t_ms<TAB>text");
        }
        const auto stamp = line.substr(0, tab);
        if (stamp.empty() || stamp.find_first_not_of("0123456789") != std::string::npos) {
            bad("t_ms '" + stamp + "' is not a non-negative integer");
        }
        std::int64_t t = 0;
        try {
            t = std::stoll(stamp);
        } catch (const std::exception&) {
            bad("t_ms out of range");
        }
        if (t < last) {
            bad("t_ms decreases");
        }
        last = t;
        events.push_back({t, line.substr(tab + 1)});
    }
    return events;
}

std::string format_trace_line(std::int64_t t_ms, const AlignmentState& state,
                              const PaceReport& pace)
{
    std::string line = std::to_string(t_ms);
    line += '\t' + std::to_string(state.sentence_index);
    line += '\t' + fixed(state.confidence);
    line += '\t' + std::string(pace_class_name(pace.pace_class));
    line += '\t' + fixed(pace.actual_fraction);
    line += '\t' + fixed(pace.ideal_fraction);
    return line;
}

int cmd_preprocess(const PreprocessOptions& opt, std::ostream& out, std::ostream& err)
{
    if (opt.out.empty()) {
        err << "error: --out is required\n";
        return kInvalidInput;
    }
    if (!(opt.time_limit_s > 0) || !(opt.wpm > 0)) {
        err << "error: --time-limit and --wpm must be positive\n";
        return kInvalidInput;
    }
    if (opt.preset && !opt.factors.empty()) {
        err << "error: --preset and --factors are mutually exclusive\n";
        return kInvalidInput;
    }
    const auto text = read_file(opt.manuscript);
    if (!text) {
        err << "error: cannot read manuscript '" << opt.manuscript << "'\n";
        return kInvalidInput;
    }

    DeliveryConfig config;
    if (opt.preset) {
        config = recommended_preset();
    } else {
        const auto factors = parse_factors(opt.factors, err);
        if (!factors) {
            return kInvalidInput;
        }
        config.selected_factors = *factors;
    }
    if (const auto warning = check_factor_overload(config)) {
        err << "warning: " << warning->message << "\n";
    }

    PolishRequest req;
    req.manuscript = split_manuscript(*text);
    req.selected_factors = config.selected_factors;
    req.time_limit_s = opt.time_limit_s;

    std::vector<std::vector<Sentence>> before;
    try {
        validate_request(req);
        for (const auto& slide : req.manuscript) {
            before.push_back(parse_annotated(slide));
        }
    } catch (const Error& e) {
        err << "error: manuscript: " << e.what() << "\n";
        return kInvalidInput;
    }

    std::optional<Manifest> manifest;
    if (!opt.slides_manifest.empty()) {
        manifest = read_manifest(opt.slides_manifest, err);
        if (!manifest) {
            return kInvalidInput;
        }
        if (manifest->thumbnails.size() != req.manuscript.size()) {
            err << "error: slides manifest lists " << manifest->thumbnails.size()
                << " slides, manuscript has " << req.manuscript.size() << "\n";
            return kInvalidInput;
        }
    }

    PolishResult polished;
    try {
        MockAdapter mock;
        if (opt.mock_llm) {
            polished = polish(req, mock);
        } else {
            auto http = HttpAdapter::from_env();
            polished = polish(req, http);
        }
    } catch (const Error& e) {
        err << "error: polish failed (" << to_string(e.code()) << "): " << e.what() << "\n";
        if (!e.detail().empty()) {
            err << "raw response:\n" << e.detail() << "\n";
        }
        return kPolishFailed;
    }

    std::vector<std::vector<Sentence>> after;
    for (const auto& slide : polished.polished) {
        after.push_back(parse_annotated(slide));
    }
    for (const auto& c : diff_scripts(before, after)) {
        auto marked = [&](std::size_t i) {
            return serialize_annotated({after[static_cast<std::size_t>(c.slide)][i]});
        };
        out << "slide " << c.slide + 1 << "\t" << change_kind_name(c.kind) << "\t";
        switch (c.kind) {
        case ChangeKind::Kept: out << marked(c.after); break;
        case ChangeKind::Inserted: out << "+ " << marked(c.after); break;
        case ChangeKind::Deleted: out << "- " << c.before_text; break;
        case ChangeKind::Changed: out << c.before_text << " => " << marked(c.after); break;
        }
        out << "\n";
    }

    ScriptPackage package;
    package.config = config;
    package.config.used_preset = opt.preset;
    package.time_limit_s = opt.time_limit_s;
    package.target_wpm = opt.wpm;
    for (std::size_t i = 0; i < after.size(); ++i) {
        SlideEntry slide;
        slide.slide_index = static_cast<int>(i);
        slide.thumbnail_ref = manifest ? manifest->thumbnails[i] : "slide-" + std::to_string(i + 1);
        slide.visual_notes = manifest ? manifest->notes[i] : "";
        slide.sentences = std::move(after[i]);
        package.slides.push_back(std::move(slide));
    }

    try {
        validate_package(package);
        save_package(package, opt.out);
    } catch (const Error& e) {
        err << "error: package: " << e.what() << "\n";
        return kInvalidPackage;
    }
    if (!opt.dsl_out.empty()) {
        std::ofstream dsl(opt.dsl_out, std::ios::binary | std::ios::trunc);
        for (std::size_t i = 0; i < polished.polished.size(); ++i) {
            dsl << (i ? "---\n" : "") << polished.polished[i] << "\n";
        }
        if (!dsl) {
            err << "error: cannot write '" << opt.dsl_out << "'\n";
            return kInvalidInput;
        }
    }

    const auto words = total_tokens(package);
    const auto seconds = estimate_duration(words, opt.wpm);
    out << "words: " << words << "  estimated: " << seconds << " s at " << opt.wpm
        << " wpm  limit: " << opt.time_limit_s << " s\n";
    if (static_cast<double>(seconds) > opt.time_limit_s) {
        err << "warning: script runs about " << seconds - static_cast<long>(opt.time_limit_s)
            << " s over the time limit\n";
    }
    out << "wrote " << opt.out << " (" << package.slides.size() << " slides, "
        << total_sentences(package) << " sentences, model " << polished.model_id << ")\n";
    return kOk;
}

int cmd_serve(const ServeOptions& opt, std::ostream& out, std::ostream& err,
              const std::atomic<bool>* stop)
{
    SessionHub hub;
    TcpServer server(hub, opt.host, opt.port);
    try {
        server.start();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kBindFailed;
    }
    g_signalled = false;
    auto old_int = std::signal(SIGINT, on_signal);
    auto old_term = std::signal(SIGTERM, on_signal);
    out << "listening on " << opt.host << ":" << server.port() << std::endl;
    while (!g_signalled && !(stop && *stop)) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    server.stop();
    std::signal(SIGINT, old_int);
    std::signal(SIGTERM, old_term);
    out << "stopped" << std::endl;
    return kOk;
}

int cmd_replay(const ReplayOptions& opt, std::ostream& out, std::ostream& err)
{
    ScriptPackage package;
    try {
        package = load_package(opt.package);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidPackage;
    }
    const auto text = read_file(opt.transcript);
    if (!text) {
        err << "error: cannot read transcript '" << opt.transcript << "'\n";
        return kInvalidInput;
    }
    std::vector<TranscriptEvent> events;
    try {
        events = parse_transcript(*text);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kMalformedLine;
    }
    auto pace_config = PaceConfig::from_package(package);
    if (opt.time_limit_s) {
        if (!(*opt.time_limit_s > 0)) {
            err << "error: --time-limit must be positive\n";
            return kInvalidInput;
        }
        pace_config.time_limit_s = *opt.time_limit_s;
    }

    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot write '" << opt.out << "'\n";
            return kInvalidInput;
        }
    }
    std::ostream& trace = opt.out.empty() ? out : file;

    const ScriptIndex index(package);
    AlignmentState state;
    for (const auto& e : events) {
        state = ingest(state, e, index);
        const auto pace = compute_pace(state, static_cast<double>(e.t_ms) / 1000.0,
                                       index.total_tokens(), pace_config);
        trace << format_trace_line(e.t_ms, state, pace) << "\n";
    }
    return kOk;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err)
{
    ScriptPackage package;
    try {
        package = load_package(opt.package);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidPackage;
    }
    const auto text = read_file(opt.events);
    if (!text) {
        err << "error: cannot read events '" << opt.events << "'\n";
        return kInvalidInput;
    }
    std::vector<SimEvent> events;
    try {
        events = parse_sim_events(*text);
    } catch (const Error& e) {
        err << "error: events " << e.what() << "\n";
        return kMalformedLine;
    }
    SimResult result;
    try {
        result = run_simulation(package, events);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    for (const auto& line : result.responder_log) {
        out << "responder: " << line << "\n";
    }
    for (const auto& line : result.controller_log) {
        if (line.rfind("Error", 0) == 0) {
            err << "controller: " << line << "\n";
        }
    }
    out << format_sim_report(result);
    return result.converged ? kOk : kDiverged;
}

}  // namespace podium::cli
