#include "restree/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace restree {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

bool parse_u64(const std::string& s, word_t& out, int base = 10) {
    if (s == "-1") { // convenience: -1 reads as the null sentinel
        out = t_null;
        return true;
    }
    const char* b = s.data();
    const char* e = b + s.size();
    auto res = std::from_chars(b, e, out, base);
    return res.ec == std::errc{} && res.ptr == e;
}

std::optional<field_mutation> parse_mutation(const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) return std::nullopt;
    std::string name = spec.substr(0, eq);
    std::string value = spec.substr(eq + 1);
    field_mutation m;
    auto split3 = [&](word_t& x, word_t& y) {
        auto c1 = value.find(':');
        auto c2 = value.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) return false;
        return parse_u64(value.substr(c1 + 1, c2 - c1 - 1), x) &&
               parse_u64(value.substr(c2 + 1), y);
    };
    if (name == "p" || name == "q" || name == "depth" || name == "weight") {
        m.which = name == "p"       ? field_mutation::field::p
                  : name == "q"     ? field_mutation::field::q
                  : name == "depth" ? field_mutation::field::depth
                                    : field_mutation::field::weight;
        if (value == "NULL") {
            m.a = t_null;
            return m;
        }
        if (!parse_u64(value, m.a)) return std::nullopt;
        return m;
    }
    if (name == "flag") {
        m.which = field_mutation::field::flag;
        if (value == "UNSPENT") m.a = 0;
        else if (value == "SPENT") m.a = 1;
        else if (value.rfind("ANNOTATED", 0) == 0) {
            m.a = 2;
            if (!split3(m.b, m.c)) return std::nullopt;
        } else return std::nullopt;
        return m;
    }
    if (name == "cba") {
        m.which = field_mutation::field::cba;
        if (value == "UNSET") m.a = 0;
        else if (value.rfind("SET:", 0) == 0) {
            m.a = 1;
            if (!parse_u64(value.substr(4), m.b)) return std::nullopt;
        } else if (value.rfind("ANNOTATED", 0) == 0) {
            m.a = 2;
            if (!split3(m.b, m.c)) return std::nullopt;
        } else return std::nullopt;
        return m;
    }
    return std::nullopt;
}

} // namespace

std::variant<trace, parse_error> parse_trace(std::istream& in) {
    trace t;
    std::string line;
    std::size_t lineno = 0;
    bool saw_directive = false;
    std::size_t pending_parents = 0;
    directive* build = nullptr;

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;

        if (pending_parents > 0) {
            for (const auto& tok : toks) {
                word_t p;
                if (!parse_u64(tok, p))
                    return parse_error{lineno, "bad parent entry '" + tok + "'"};
                build->words.push_back(p);
                if (--pending_parents == 0) break;
            }
            continue;
        }

        const std::string& verb = toks[0];
        auto need = [&](std::size_t n) { return toks.size() == n + 1; };

        if (verb == "DELTA" || verb == "SEED" || verb == "BUDGET") {
            if (saw_directive)
                return parse_error{lineno, verb + " must precede directives"};
            word_t v;
            if (!need(1) || !parse_u64(toks[1], v))
                return parse_error{lineno, "usage: " + verb + " <n>"};
            if (verb == "DELTA") t.delta = v;
            else if (verb == "SEED") t.seed = v;
            else t.budget = v;
            continue;
        }
        if (verb == "ADVERSARY") {
            if (!need(1)) return parse_error{lineno, "usage: ADVERSARY <name>"};
            t.adversary = toks[1];
            continue;
        }
        if (verb == "RATE") {
            if (!need(1)) return parse_error{lineno, "usage: RATE <f>"};
            try {
                t.rate = std::stod(toks[1]);
            } catch (...) {
                return parse_error{lineno, "bad rate '" + toks[1] + "'"};
            }
            continue;
        }

        directive d;
        d.line = lineno;
        if (verb == "ADDLEAF") {
            if (!need(2) || !parse_u64(toks[1], d.a) || !parse_u64(toks[2], d.b))
                return parse_error{lineno, "usage: ADDLEAF <parent> <weight>"};
            d.k = directive::kind::addleaf;
        } else if (verb == "LA" || verb == "WLA" || verb == "LCA" ||
                   verb == "BVQ") {
            if (!need(2) || !parse_u64(toks[1], d.a) || !parse_u64(toks[2], d.b))
                return parse_error{lineno, "usage: " + verb + " <a> <b>"};
            d.k = verb == "LA"    ? directive::kind::la
                  : verb == "WLA" ? directive::kind::wla
                  : verb == "LCA" ? directive::kind::lca
                                  : directive::kind::bvq;
        } else if (verb == "CORRUPT") {
            if (toks.size() < 4 || !parse_u64(toks[1], d.a))
                return parse_error{lineno,
                                   "usage: CORRUPT <node> FIELD|RAW ..."};
            if (toks[2] == "FIELD") {
                if (toks.size() != 4)
                    return parse_error{lineno,
                                       "usage: CORRUPT <node> FIELD k=v"};
                auto m = parse_mutation(toks[3]);
                if (!m)
                    return parse_error{lineno,
                                       "bad field mutation '" + toks[3] + "'"};
                d.k = directive::kind::corrupt_field;
                d.mutation = *m;
            } else if (toks[2] == "RAW") {
                d.k = directive::kind::corrupt_raw;
                for (std::size_t i = 3; i < toks.size(); ++i) {
                    word_t w;
                    if (!parse_u64(toks[i], w, 16))
                        return parse_error{lineno,
                                           "bad hex word '" + toks[i] + "'"};
                    d.words.push_back(w);
                }
            } else {
                return parse_error{lineno, "expected FIELD or RAW"};
            }
        } else if (verb == "CHECKPOINT") {
            d.k = directive::kind::checkpoint;
        } else if (verb == "BUILD_STATIC") {
            word_t n;
            if (!need(2) || !parse_u64(toks[1], d.static_delta) ||
                !parse_u64(toks[2], n) || d.static_delta == 0 || n == 0)
                return parse_error{lineno, "usage: BUILD_STATIC <delta> <n>"};
            if (saw_directive)
                return parse_error{lineno,
                                   "BUILD_STATIC must be the first directive"};
            d.k = directive::kind::build_static;
            t.directives.push_back(d);
            saw_directive = true;
            build = &t.directives.back();
            pending_parents = n;
            continue;
        } else {
            return parse_error{lineno, "unknown directive '" + verb + "'"};
        }
        t.directives.push_back(d);
        saw_directive = true;
    }
    if (pending_parents > 0)
        return parse_error{lineno, "BUILD_STATIC parent block is incomplete"};
    return t;
}

std::variant<trace, parse_error> parse_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return parse_error{0, "cannot open '" + path + "'"};
    return parse_trace(in);
}

std::string serialize_trace(const trace& t) {
    std::ostringstream out;
    out << "DELTA " << t.delta << "\n";
    out << "SEED " << t.seed << "\n";
    if (t.adversary != "none") out << "ADVERSARY " << t.adversary << "\n";
    if (t.budget != ~word_t{0}) out << "BUDGET " << t.budget << "\n";
    if (t.rate != 0.0) out << "RATE " << t.rate << "\n";
    for (const auto& d : t.directives) {
        switch (d.k) {
        case directive::kind::addleaf:
            out << "ADDLEAF " << d.a << " " << d.b << "\n";
            break;
        case directive::kind::la:
            out << "LA " << d.a << " " << d.b << "\n";
            break;
        case directive::kind::wla:
            out << "WLA " << d.a << " " << d.b << "\n";
            break;
        case directive::kind::lca:
            out << "LCA " << d.a << " " << d.b << "\n";
            break;
        case directive::kind::bvq:
            out << "BVQ " << d.a << " " << d.b << "\n";
            break;
        case directive::kind::checkpoint:
            out << "CHECKPOINT\n";
            break;
        case directive::kind::corrupt_field: {
            out << "CORRUPT " << d.a << " FIELD ";
            const auto& m = d.mutation;
            switch (m.which) {
            case field_mutation::field::p:
                out << "p=" << (m.a == t_null ? std::string("NULL")
                                              : std::to_string(m.a));
                break;
            case field_mutation::field::q:
                out << "q=" << (m.a == t_null ? std::string("NULL")
                                              : std::to_string(m.a));
                break;
            case field_mutation::field::depth:
                out << "depth=" << m.a;
                break;
            case field_mutation::field::weight:
                out << "weight=" << m.a;
                break;
            case field_mutation::field::flag:
                if (m.a == 0) out << "flag=UNSPENT";
                else if (m.a == 1) out << "flag=SPENT";
                else out << "flag=ANNOTATED:" << m.b << ":" << m.c;
                break;
            case field_mutation::field::cba:
                if (m.a == 0) out << "cba=UNSET";
                else if (m.a == 1) out << "cba=SET:" << m.b;
                else out << "cba=ANNOTATED:" << m.b << ":" << m.c;
                break;
            }
            out << "\n";
            break;
        }
        case directive::kind::corrupt_raw: {
            out << "CORRUPT " << d.a << " RAW";
            char buf[32];
            for (word_t w : d.words) {
                std::snprintf(buf, sizeof buf, " %llx",
                              static_cast<unsigned long long>(w));
                out << buf;
            }
            out << "\n";
            break;
        }
        case directive::kind::build_static: {
            out << "BUILD_STATIC " << d.static_delta << " " << d.words.size()
                << "\n";
            for (std::size_t i = 0; i < d.words.size(); ++i) {
                out << (d.words[i] == t_null
                            ? std::string("-1")
                            : std::to_string(d.words[i]))
                    << ((i + 1) % 16 == 0 || i + 1 == d.words.size() ? "\n"
                                                                     : " ");
            }
            break;
        }
        }
    }
    return out.str();
}

} // namespace restree
