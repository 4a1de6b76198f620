#pragma once

#include <array>
#include <string>
#include <vector>

#include "infoveil/retrieval.hpp"

namespace infoveil {

enum class PostLabel { IngroupSick = 0, OutgroupSick = 1, Other = 2 };

PostLabel parse_label(const std::string& text);
const char* to_string(PostLabel label);

/// Term lists driving the rule classifier. Matching uses the same substring
/// semantics as keyword retrieval (ASCII case-insensitive, other codepoints
/// exact). A negation marker ending within `negation_window` codepoints
/// before a symptom occurrence cancels that occurrence.
struct Lexicon {
    std::vector<std::string> symptom_terms;
    std::vector<std::string> ingroup_markers;
    std::vector<std::string> negation_markers;
    int negation_window = 3;

    void validate() const;
};

/// Sectioned plain text: `[symptoms]`, `[ingroup]`, `[negation]` headers,
/// one term per line, `#` comments ignored.
Lexicon load_lexicon_file(const std::string& path);

/// Deterministic rule standing in for a trained classifier: no live symptom
/// term means Other; otherwise an ingroup marker anywhere makes the post
/// IngroupSick, else OutgroupSick.
PostLabel classify_text(const std::string& text, const Lexicon& lexicon);
inline PostLabel classify_rule(const Post& post, const Lexicon& lexicon) {
    return classify_text(post.text, lexicon);
}

/// 3x3 confusion counts, rows = true label, columns = predicted.
struct ConfusionMatrix {
    std::array<std::array<long, 3>, 3> counts{};

    void add(PostLabel truth, PostLabel predicted, long n = 1);
    long total() const;
};

struct EvalMetrics {
    double precision = 0.0;  // macro average over the 3 classes
    double recall = 0.0;     // macro average
    double f1 = 0.0;         // harmonic mean of macro precision and recall
    double accuracy = 0.0;
};

EvalMetrics evaluate(const ConfusionMatrix& matrix);

struct Annotation {
    std::string unit_id;
    std::string rater_id;
    PostLabel label;
};

/// Inter-rater annotation triples; at most one label per (unit, rater).
struct AnnotationSet {
    std::vector<Annotation> units;

    void validate() const;
};

/// Header `unit_id,rater_id,label` with label in {ingroup,outgroup,other}.
AnnotationSet load_annotations_csv(const std::string& path);

/// Post CSV with a trailing `label` column (evaluation corpora are small,
/// so this loads eagerly).
std::vector<std::pair<Post, PostLabel>> load_labeled_posts_csv(const std::string& path);

/// Nominal-level Krippendorff alpha via the coincidence matrix. Units with
/// fewer than two labels are dropped; needs at least two remaining units
/// and at least two distinct categories overall.
double krippendorff_alpha(const AnnotationSet& annotations);

} // namespace infoveil
