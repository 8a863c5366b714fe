#include "tsc/tsfile.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace tsc {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw SyntaxError("line " + std::to_string(line) + ": " + msg, 0);
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream is(body);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

double parse_number(int line, const std::string& tok) {
    double v = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) fail(line, "expected a number, got '" + tok + "'");
    return v;
}

}  // namespace

TimeScale parse_timescale(std::string_view text) {
    std::optional<std::pair<double, double>> window;
    std::optional<TailSpec> tail;
    std::vector<std::pair<Segment, int>> raw;  // segment + defining line

    std::istringstream stream{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& verb = toks[0];

        if (verb == "window") {
            if (toks.size() != 3) fail(lineno, "window needs <start> <end>");
            if (window) fail(lineno, "duplicate window declaration");
            const double a = parse_number(lineno, toks[1]);
            const double b = parse_number(lineno, toks[2]);
            if (!(a <= b)) fail(lineno, "window start must not exceed its end");
            window = {a, b};
        } else if (verb == "interval") {
            if (toks.size() != 3) fail(lineno, "interval needs <a> <b>");
            const double a = parse_number(lineno, toks[1]);
            const double b = parse_number(lineno, toks[2]);
            if (!(a < b)) fail(lineno, "interval needs a < b");
            raw.push_back({DenseInterval{a, b}, lineno});
        } else if (verb == "points") {
            if (toks.size() < 2) fail(lineno, "points needs at least one value");
            for (std::size_t i = 1; i < toks.size(); ++i) {
                raw.push_back({ScatteredPoint{parse_number(lineno, toks[i])}, lineno});
            }
        } else if (verb == "tail") {
            if (tail) fail(lineno, "duplicate tail declaration");
            if (toks.size() < 2) fail(lineno, "tail needs a kind");
            const std::string& kind = toks[1];
            if (kind == "continuous" && toks.size() == 2) {
                tail = ContinuousTail{};
            } else if (kind == "uniform" && toks.size() == 3) {
                const double h = parse_number(lineno, toks[2]);
                if (!(h > 0)) fail(lineno, "uniform tail step must be positive");
                tail = UniformTail{h};
            } else if (kind == "geometric" && toks.size() == 3) {
                const double q = parse_number(lineno, toks[2]);
                if (!(q > 1)) fail(lineno, "geometric tail ratio must exceed 1");
                tail = GeometricTail{q};
            } else if (kind == "none" && toks.size() == 2) {
                tail = WindowOnlyTail{};
            } else {
                fail(lineno, "tail must be continuous | uniform <h> | geometric <q> | none");
            }
        } else {
            fail(lineno, "unknown directive '" + verb + "'");
        }
    }

    if (!window) throw SyntaxError("missing window declaration", 0);
    if (!tail) throw SyntaxError("missing tail declaration", 0);
    if (raw.empty()) throw SyntaxError("no interval or points entries", 0);

    const auto seg_lo = [](const Segment& s) {
        if (const auto* d = std::get_if<DenseInterval>(&s)) return d->a;
        return std::get<ScatteredPoint>(s).t;
    };
    const auto seg_hi = [](const Segment& s) {
        if (const auto* d = std::get_if<DenseInterval>(&s)) return d->b;
        return std::get<ScatteredPoint>(s).t;
    };

    for (const auto& [seg, ln] : raw) {
        if (seg_lo(seg) < window->first || seg_hi(seg) > window->second) {
            fail(ln, "segment lies outside the declared window");
        }
    }

    std::stable_sort(raw.begin(), raw.end(), [&](const auto& x, const auto& y) {
        return seg_lo(x.first) < seg_lo(y.first);
    });
    for (std::size_t i = 1; i < raw.size(); ++i) {
        const double prev_hi = seg_hi(raw[i - 1].first);
        const double cur_lo = seg_lo(raw[i].first);
        const bool both_dense = std::holds_alternative<DenseInterval>(raw[i - 1].first) &&
                                std::holds_alternative<DenseInterval>(raw[i].first);
        if (cur_lo < prev_hi || (cur_lo == prev_hi && !both_dense)) {
            fail(raw[i].second, "segment overlaps the one before it");
        }
    }
    if (seg_lo(raw.front().first) != window->first) {
        fail(raw.front().second, "first segment must start at the window start");
    }
    if (seg_hi(raw.back().first) != window->second) {
        fail(raw.back().second, "last segment must end at the window end");
    }

    std::vector<Segment> segments;
    segments.reserve(raw.size());
    for (auto& [seg, ln] : raw) segments.push_back(seg);

    try {
        return TimeScale(window->first, std::move(segments), *tail);
    } catch (const Error& e) {
        throw SyntaxError(e.what(), 0);
    }
}

TimeScale load_timescale_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open time-scale file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_timescale(buf.str());
}

}  // namespace tsc
