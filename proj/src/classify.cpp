#include "infoveil/classify.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace infoveil {

namespace {

// Decodes UTF-8 into codepoints, folding ASCII letters to lower case.
// Invalid bytes pass through as their raw value, which keeps matching
// deterministic on dirty input.
std::vector<char32_t> decode_folded(const std::string& text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        char32_t cp = c;
        std::size_t len = 1;
        if (c >= 0xF0 && i + 3 < text.size()) { cp = c & 0x07u; len = 4; }
        else if (c >= 0xE0 && i + 2 < text.size()) { cp = c & 0x0Fu; len = 3; }
        else if (c >= 0xC0 && i + 1 < text.size()) { cp = c & 0x1Fu; len = 2; }
        for (std::size_t j = 1; j < len; ++j) {
            const unsigned char cc = static_cast<unsigned char>(text[i + j]);
            if ((cc & 0xC0u) != 0x80u) { cp = c; len = 1; break; }
            cp = (cp << 6) | (cc & 0x3Fu);
        }
        if (cp >= 'A' && cp <= 'Z') cp = cp - 'A' + 'a';
        out.push_back(cp);
        i += len;
    }
    return out;
}

// All start positions of `needle` in `haystack`.
std::vector<std::size_t> find_all(const std::vector<char32_t>& haystack,
                                  const std::vector<char32_t>& needle) {
    std::vector<std::size_t> hits;
    if (needle.empty() || needle.size() > haystack.size()) return hits;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < needle.size(); ++j)
            if (haystack[i + j] != needle[j]) { ok = false; break; }
        if (ok) hits.push_back(i);
    }
    return hits;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    auto sp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (b < e && sp(s[b])) ++b;
    while (e > b && sp(s[e - 1])) --e;
    return s.substr(b, e - b);
}

} // namespace

PostLabel parse_label(const std::string& text) {
    if (text == "ingroup") return PostLabel::IngroupSick;
    if (text == "outgroup") return PostLabel::OutgroupSick;
    if (text == "other") return PostLabel::Other;
    raise(ErrorKind::Parse, "unknown label '" + text + "' (expected ingroup/outgroup/other)");
}

const char* to_string(PostLabel label) {
    switch (label) {
    case PostLabel::IngroupSick: return "ingroup";
    case PostLabel::OutgroupSick: return "outgroup";
    case PostLabel::Other: return "other";
    }
    return "other";
}

void Lexicon::validate() const {
    if (symptom_terms.empty() || ingroup_markers.empty() || negation_markers.empty())
        raise(ErrorKind::InvalidInput, "lexicon sections must all be non-empty");
    if (negation_window < 0)
        raise(ErrorKind::InvalidInput, "negation window must be >= 0");
}

Lexicon load_lexicon_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + path + "'");
    Lexicon lex;
    std::vector<std::string>* section = nullptr;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s == "[symptoms]") { section = &lex.symptom_terms; continue; }
        if (s == "[ingroup]") { section = &lex.ingroup_markers; continue; }
        if (s == "[negation]") { section = &lex.negation_markers; continue; }
        if (s[0] == '[')
            raise(ErrorKind::Parse, path + ":" + std::to_string(line_no) +
                                        ": unknown section " + s);
        if (!section)
            raise(ErrorKind::Parse,
                  path + ":" + std::to_string(line_no) + ": term before any section header");
        section->push_back(s);
    }
    lex.validate();
    return lex;
}

PostLabel classify_text(const std::string& text, const Lexicon& lexicon) {
    lexicon.validate();
    const auto hay = decode_folded(text);

    // (end position, exclusive) of every negation occurrence
    std::vector<std::size_t> negation_ends;
    for (const auto& term : lexicon.negation_markers) {
        const auto needle = decode_folded(term);
        for (std::size_t s : find_all(hay, needle)) negation_ends.push_back(s + needle.size());
    }

    bool live_symptom = false;
    for (const auto& term : lexicon.symptom_terms) {
        const auto needle = decode_folded(term);
        for (std::size_t s : find_all(hay, needle)) {
            bool cancelled = false;
            for (std::size_t e : negation_ends)
                if (e <= s && s - e <= static_cast<std::size_t>(lexicon.negation_window)) {
                    cancelled = true;
                    break;
                }
            if (!cancelled) { live_symptom = true; break; }
        }
        if (live_symptom) break;
    }
    if (!live_symptom) return PostLabel::Other;

    for (const auto& term : lexicon.ingroup_markers)
        if (!find_all(hay, decode_folded(term)).empty()) return PostLabel::IngroupSick;
    return PostLabel::OutgroupSick;
}

void ConfusionMatrix::add(PostLabel truth, PostLabel predicted, long n) {
    counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)] += n;
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts)
        for (long v : row) t += v;
    return t;
}

EvalMetrics evaluate(const ConfusionMatrix& matrix) {
    const long total = matrix.total();
    if (total <= 0) raise(ErrorKind::Domain, "evaluate: empty confusion matrix");
    for (const auto& row : matrix.counts)
        for (long v : row)
            if (v < 0) raise(ErrorKind::Domain, "evaluate: negative count");

    double trace = 0.0;
    double macro_p = 0.0;
    double macro_r = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        trace += static_cast<double>(matrix.counts[c][c]);
        long col = 0, row = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            col += matrix.counts[i][c];
            row += matrix.counts[c][i];
        }
        macro_p += col > 0 ? static_cast<double>(matrix.counts[c][c]) / col : 0.0;
        macro_r += row > 0 ? static_cast<double>(matrix.counts[c][c]) / row : 0.0;
    }
    EvalMetrics m;
    m.accuracy = trace / static_cast<double>(total);
    m.precision = macro_p / 3.0;
    m.recall = macro_r / 3.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

void AnnotationSet::validate() const {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& a : units) {
        if (a.unit_id.empty() || a.rater_id.empty())
            raise(ErrorKind::InvalidInput, "annotation with empty unit or rater id");
        if (!seen.insert({a.unit_id, a.rater_id}).second)
            raise(ErrorKind::InvalidInput, "duplicate label for unit '" + a.unit_id +
                                               "', rater '" + a.rater_id + "'");
    }
}

AnnotationSet load_annotations_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + path + "'");
    CsvReader reader(in, path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) raise(ErrorKind::Parse, path + ": empty file");
    if (fields.size() != 3 || fields[0] != "unit_id" || fields[1] != "rater_id" ||
        fields[2] != "label")
        reader.fail("expected header 'unit_id,rater_id,label'");
    AnnotationSet set;
    while (reader.next(fields)) {
        if (fields.size() != 3) reader.fail("expected 3 fields");
        Annotation a;
        a.unit_id = fields[0];
        a.rater_id = fields[1];
        try {
            a.label = parse_label(fields[2]);
        } catch (const Error& e) {
            reader.fail(e.what());
        }
        set.units.push_back(std::move(a));
    }
    set.validate();
    return set;
}

std::vector<std::pair<Post, PostLabel>> load_labeled_posts_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + path + "'");
    CsvReader reader(in, path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) raise(ErrorKind::Parse, path + ": empty file");
    if (fields.size() != 6 || fields[0] != "id" || fields[1] != "timestamp" ||
        fields[2] != "region" || fields[3] != "is_repost" || fields[4] != "text" ||
        fields[5] != "label")
        reader.fail("expected header 'id,timestamp,region,is_repost,text,label'");
    std::vector<std::pair<Post, PostLabel>> out;
    long record = 0;
    while (reader.next(fields)) {
        ++record;
        const auto fail = [&](const std::string& m) {
            reader.fail("record " + std::to_string(record) + ": " + m);
        };
        if (fields.size() != 6) fail("expected 6 fields");
        Post p;
        if (fields[0].empty()) fail("empty post id");
        p.id = fields[0];
        try {
            p.timestamp = DateTime::parse(fields[1]);
        } catch (const Error& e) {
            fail(e.what());
        }
        p.region = fields[2];
        if (fields[3] == "0") p.is_repost = false;
        else if (fields[3] == "1") p.is_repost = true;
        else fail("is_repost must be 0 or 1");
        p.text = fields[4];
        PostLabel label = PostLabel::Other;
        try {
            label = parse_label(fields[5]);
        } catch (const Error& e) {
            fail(e.what());
        }
        out.emplace_back(std::move(p), label);
    }
    return out;
}

double krippendorff_alpha(const AnnotationSet& annotations) {
    annotations.validate();

    std::map<std::string, std::vector<int>> by_unit;
    for (const auto& a : annotations.units)
        by_unit[a.unit_id].push_back(static_cast<int>(a.label));

    // Coincidence matrix over the 3 nominal categories.
    double o[3][3] = {};
    std::size_t usable_units = 0;
    for (const auto& [unit, labels] : by_unit) {
        const std::size_t m = labels.size();
        if (m < 2) continue;
        ++usable_units;
        const double w = 1.0 / static_cast<double>(m - 1);
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q)
                if (p != q) o[labels[p]][labels[q]] += w;
    }
    if (usable_units < 2)
        raise(ErrorKind::InsufficientData,
              "krippendorff_alpha: need at least 2 units with >= 2 labels");

    double n_c[3] = {};
    double n = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < 3; ++k) { n_c[c] += o[c][k]; n += o[c][k]; }

    double observed_off = 0.0;
    double expected_off = 0.0;
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < 3; ++k)
            if (c != k) {
                observed_off += o[c][k];
                expected_off += n_c[c] * n_c[k];
            }
    if (expected_off <= 0.0)
        raise(ErrorKind::Degenerate,
              "krippendorff_alpha: every label identical, expected disagreement is zero");
    return 1.0 - (n - 1.0) * observed_off / expected_off;
}

} // namespace infoveil
