#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "infoveil/csv.hpp"
#include "infoveil/series.hpp"

namespace infoveil {

/// Timestamp at minute resolution, `YYYY-MM-DDTHH:MM`.
struct DateTime {
    Date date;
    int minute_of_day = 0;

    static DateTime parse(const std::string& text);
    std::string to_string() const;
};

/// One social-media message. `region` is a flat code, empty = untagged.
/// Ids are required to be unique within a corpus; the streaming readers do
/// not enforce that (bounded memory), it is part of the input contract.
struct Post {
    std::string id;
    DateTime timestamp;
    std::string text;
    std::string region;
    bool is_repost = false;
};

/// Conjunction of substring terms.
struct KeywordQuery {
    std::vector<std::string> terms;

    std::string render() const;  // joins with " AND "
};

/// Disjunction over queries.
struct QuerySet {
    std::vector<KeywordQuery> queries;
};

/// Splits a line on the literal ` AND ` token; each fragment is trimmed and
/// becomes one conjunctive term. Blank lines and empty fragments are parse
/// errors (reported with `line_number` when nonzero).
KeywordQuery parse_query(const std::string& line, long line_number = 0);

/// One query per line, `#` comments and blank lines skipped.
QuerySet load_query_file(const std::string& path);

/// ASCII bytes A-Z lowered in place; multi-byte UTF-8 unaffected.
std::string fold_ascii(std::string_view text);

/// True when every term occurs as a contiguous substring of the post text.
/// ASCII compares case-insensitively, everything else exactly.
bool matches(const KeywordQuery& query, const Post& post);
bool matches_any(const QuerySet& queries, const Post& post);

/// Streaming corpus reader over `id,timestamp,region,is_repost,text` CSV.
/// Standard quoting, one Post per record, bounded memory.
class CorpusReader {
public:
    CorpusReader(std::istream& in, std::string source_name);

    bool next(Post& post);
    long record_index() const noexcept { return record_; }

private:
    CsvReader csv_;
    std::vector<std::string> fields_;
    long record_ = 0;
    bool header_done_ = false;
};

std::string posts_csv_header();
std::string post_to_csv_row(const Post& post);

/// Emits every post matching at least one query, preserving order, each at
/// most once. Single pass.
void retrieve(CorpusReader& corpus, const QuerySet& queries,
              const std::function<void(const Post&)>& sink);
std::vector<Post> retrieve(const std::vector<Post>& corpus, const QuerySet& queries);

/// Drops reposts, preserving order.
std::vector<Post> dedupe(const std::vector<Post>& posts);

/// Streaming daily counter over [from, to], zero-filled. Posts outside the
/// range are ignored; an optional predicate on the region code restricts
/// which posts count.
class DailyAggregator {
public:
    using RegionFilter = std::function<bool(const std::string&)>;

    DailyAggregator(Date from, Date to, std::string label,
                    std::optional<RegionFilter> filter = std::nullopt);

    void add(const Post& post);
    DailySeries finish() const;

private:
    Date from_;
    std::vector<double> counts_;
    std::string label_;
    std::optional<RegionFilter> filter_;
};

DailySeries aggregate_daily(const std::vector<Post>& posts, Date from, Date to,
                            const std::optional<DailyAggregator::RegionFilter>& filter =
                                std::nullopt,
                            const std::string& label = "posts");

} // namespace infoveil
