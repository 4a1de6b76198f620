#include "infoveil/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

namespace infoveil {

namespace {

constexpr const char* kSeparator = " AND ";

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

} // namespace

DateTime DateTime::parse(const std::string& text) {
    if (text.size() != 16 || text[10] != 'T' || text[13] != ':')
        raise(ErrorKind::Parse, "expected timestamp YYYY-MM-DDTHH:MM, got '" + text + "'");
    DateTime dt;
    dt.date = Date::parse(text.substr(0, 10));
    for (int i : {11, 12, 14, 15})
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            raise(ErrorKind::Parse, "expected timestamp YYYY-MM-DDTHH:MM, got '" + text + "'");
    const int hh = std::stoi(text.substr(11, 2));
    const int mm = std::stoi(text.substr(14, 2));
    if (hh > 23 || mm > 59)
        raise(ErrorKind::Parse, "invalid time of day in '" + text + "'");
    dt.minute_of_day = hh * 60 + mm;
    return dt;
}

std::string DateTime::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d", minute_of_day / 60, minute_of_day % 60);
    return date.to_string() + buf;
}

std::string KeywordQuery::render() const {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += kSeparator;
        out += terms[i];
    }
    return out;
}

KeywordQuery parse_query(const std::string& line, long line_number) {
    const auto where = [&] {
        return line_number > 0 ? "line " + std::to_string(line_number) + ": " : std::string();
    };
    KeywordQuery query;
    std::size_t pos = 0;
    const std::string sep = kSeparator;
    while (true) {
        const std::size_t hit = line.find(sep, pos);
        const std::string fragment =
            trim(hit == std::string::npos ? line.substr(pos) : line.substr(pos, hit - pos));
        if (fragment.empty())
            raise(ErrorKind::Parse,
                  where() + (query.terms.empty() && hit == std::string::npos
                                 ? "blank query line"
                                 : "empty term in query '" + line + "'"));
        query.terms.push_back(fragment);
        if (hit == std::string::npos) break;
        pos = hit + sep.size();
    }
    return query;
}

QuerySet load_query_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::Io, "cannot open '" + path + "'");
    QuerySet set;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        try {
            set.queries.push_back(parse_query(line, line_no));
        } catch (const Error& e) {
            raise(ErrorKind::Parse, path + ": " + e.what());
        }
    }
    if (set.queries.empty()) raise(ErrorKind::Parse, path + ": no queries");
    return set;
}

std::string fold_ascii(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool matches(const KeywordQuery& query, const Post& post) {
    const std::string text = fold_ascii(post.text);
    for (const auto& term : query.terms)
        if (text.find(fold_ascii(term)) == std::string::npos) return false;
    return true;
}

bool matches_any(const QuerySet& queries, const Post& post) {
    for (const auto& q : queries.queries)
        if (matches(q, post)) return true;
    return false;
}

CorpusReader::CorpusReader(std::istream& in, std::string source_name)
    : csv_(in, std::move(source_name)) {}

bool CorpusReader::next(Post& post) {
    if (!header_done_) {
        if (!csv_.next(fields_)) csv_.fail("empty corpus file");
        if (fields_.size() != 5 || fields_[0] != "id" || fields_[1] != "timestamp" ||
            fields_[2] != "region" || fields_[3] != "is_repost" || fields_[4] != "text")
            csv_.fail("expected header 'id,timestamp,region,is_repost,text'");
        header_done_ = true;
    }
    if (!csv_.next(fields_)) return false;
    ++record_;
    const auto fail = [&](const std::string& m) {
        csv_.fail("record " + std::to_string(record_) + ": " + m);
    };
    if (fields_.size() != 5)
        fail("expected 5 fields, got " + std::to_string(fields_.size()));
    if (fields_[0].empty()) fail("empty post id");
    post.id = fields_[0];
    try {
        post.timestamp = DateTime::parse(fields_[1]);
    } catch (const Error& e) {
        fail(e.what());
    }
    post.region = fields_[2];
    if (fields_[3] == "0") post.is_repost = false;
    else if (fields_[3] == "1") post.is_repost = true;
    else fail("is_repost must be 0 or 1, got '" + fields_[3] + "'");
    post.text = fields_[4];
    return true;
}

std::string posts_csv_header() { return "id,timestamp,region,is_repost,text\n"; }

std::string post_to_csv_row(const Post& post) {
    std::string row = csv_quote(post.id);
    row += ',';
    row += post.timestamp.to_string();
    row += ',';
    row += csv_quote(post.region);
    row += ',';
    row += post.is_repost ? '1' : '0';
    row += ',';
    row += csv_quote(post.text);
    row += '\n';
    return row;
}

void retrieve(CorpusReader& corpus, const QuerySet& queries,
              const std::function<void(const Post&)>& sink) {
    if (queries.queries.empty()) raise(ErrorKind::InvalidInput, "empty query set");
    Post post;
    while (corpus.next(post))
        if (matches_any(queries, post)) sink(post);
}

std::vector<Post> retrieve(const std::vector<Post>& corpus, const QuerySet& queries) {
    if (queries.queries.empty()) raise(ErrorKind::InvalidInput, "empty query set");
    std::vector<Post> out;
    for (const auto& post : corpus)
        if (matches_any(queries, post)) out.push_back(post);
    return out;
}

std::vector<Post> dedupe(const std::vector<Post>& posts) {
    std::vector<Post> out;
    out.reserve(posts.size());
    for (const auto& p : posts)
        if (!p.is_repost) out.push_back(p);
    return out;
}

DailyAggregator::DailyAggregator(Date from, Date to, std::string label,
                                 std::optional<RegionFilter> filter)
    : from_(from), label_(std::move(label)), filter_(std::move(filter)) {
    if (to < from) raise(ErrorKind::InvalidInput, "aggregate: empty date range");
    counts_.assign(static_cast<std::size_t>(to - from) + 1, 0.0);
}

void DailyAggregator::add(const Post& post) {
    const Date d = post.timestamp.date;
    if (d < from_) return;
    const auto ix = static_cast<std::size_t>(d - from_);
    if (ix >= counts_.size()) return;
    if (filter_ && !(*filter_)(post.region)) return;
    counts_[ix] += 1.0;
}

DailySeries DailyAggregator::finish() const { return DailySeries(from_, counts_, label_); }

DailySeries aggregate_daily(const std::vector<Post>& posts, Date from, Date to,
                            const std::optional<DailyAggregator::RegionFilter>& filter,
                            const std::string& label) {
    DailyAggregator agg(from, to, label, filter);
    for (const auto& p : posts) agg.add(p);
    return agg.finish();
}

} // namespace infoveil
