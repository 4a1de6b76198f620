#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "infoveil/classify.hpp"
#include "infoveil/rng.hpp"
#include "oracles.hpp"

using namespace infoveil;

namespace {

Lexicon test_lexicon() {
    Lexicon lex;
    lex.symptom_terms = {"fever", "cough", "pneumonia", "sick", "temperature", "发烧", "咳嗽"};
    lex.ingroup_markers = {"i ", "my ", "our ", "我"};
    lex.negation_markers = {"no ", "not ", "没有"};
    lex.negation_window = 3;
    return lex;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& content, const char* ext = ".txt") {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("infoveil_cls_" + std::to_string(counter++) + ext))
                   .string();
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_SUITE("rule classifier") {
    TEST_CASE("first-person symptom report is ingroup") {
        const auto label = classify_text(
            "Back in 2003 I got pneumonia with fever and cough, and now I started "
            "coughing again. It has lasted a month.",
            test_lexicon());
        CHECK(label == PostLabel::IngroupSick);
    }

    TEST_CASE("third-person report is outgroup") {
        const auto label = classify_text(
            "A man from the next village felt sick with cold symptoms. His brother "
            "measured his temperature, 38 degrees, and called an ambulance.",
            test_lexicon());
        CHECK(label == PostLabel::OutgroupSick);
    }

    TEST_CASE("no symptom terms means other") {
        CHECK(classify_text("stocking up on masks before going out", test_lexicon()) ==
              PostLabel::Other);
        CHECK(classify_text("", test_lexicon()) == PostLabel::Other);
    }

    TEST_CASE("negation immediately before a symptom cancels it") {
        const Lexicon lex = test_lexicon();
        CHECK(classify_text("no fever today", lex) == PostLabel::Other);
        CHECK(classify_text("没有发烧", lex) == PostLabel::Other);
        // beyond the 3-codepoint window the symptom stays live
        CHECK(classify_text("not really having a fever, he says", lex) ==
              PostLabel::OutgroupSick);
        // a second uncancelled symptom keeps the post sick
        CHECK(classify_text("no fever but still a bad cough, he says", lex) ==
              PostLabel::OutgroupSick);
    }

    TEST_CASE("deterministic function of text and lexicon") {
        const std::string text = "我咳嗽了一个月";
        const Lexicon lex = test_lexicon();
        const PostLabel first = classify_text(text, lex);
        for (int i = 0; i < 5; ++i) CHECK(classify_text(text, lex) == first);
        CHECK(first == PostLabel::IngroupSick);
    }

    TEST_CASE("lexicon file parsing") {
        TempFile f(
            "# cough and friends\n"
            "[symptoms]\n"
            "fever\n"
            "cough\n"
            "\n"
            "[ingroup]\n"
            "i \n"
            "[negation]\n"
            "no \n");
        const Lexicon lex = load_lexicon_file(f.path);
        CHECK(lex.symptom_terms.size() == 2);
        CHECK(lex.ingroup_markers.size() == 1);
        CHECK(lex.negation_markers.size() == 1);

        TempFile bad("[symptoms]\nfever\n[unknown]\nx\n");
        CHECK_THROWS_AS(load_lexicon_file(bad.path), Error);
        TempFile missing("[symptoms]\nfever\n[ingroup]\ni \n");
        CHECK_THROWS_AS(load_lexicon_file(missing.path), Error);
    }
}

TEST_SUITE("evaluation metrics") {
    TEST_CASE("perfect diagonal gives all ones") {
        ConfusionMatrix m;
        m.add(PostLabel::IngroupSick, PostLabel::IngroupSick, 10);
        m.add(PostLabel::OutgroupSick, PostLabel::OutgroupSick, 5);
        m.add(PostLabel::Other, PostLabel::Other, 85);
        const EvalMetrics e = evaluate(m);
        CHECK(e.accuracy == doctest::Approx(1.0));
        CHECK(e.precision == doctest::Approx(1.0));
        CHECK(e.recall == doctest::Approx(1.0));
        CHECK(e.f1 == doctest::Approx(1.0));
    }

    TEST_CASE("hand-worked three-class case") {
        // rows true, columns predicted: [[1,1,0],[0,1,0],[0,0,1]]
        ConfusionMatrix m;
        m.counts = {{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
        const EvalMetrics e = evaluate(m);
        // per class precision: 1/1, 1/2, 1/1 -> macro 5/6
        // per class recall:    1/2, 1/1, 1/1 -> macro 5/6
        CHECK(e.accuracy == doctest::Approx(3.0 / 4.0));
        CHECK(e.precision == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
        CHECK(e.recall == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
        CHECK(e.f1 == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    }

    TEST_CASE("absent class contributes zero, not NaN") {
        ConfusionMatrix m;
        m.counts = {{{5, 0, 0}, {2, 3, 0}, {0, 0, 0}}};
        const EvalMetrics e = evaluate(m);
        CHECK(std::isfinite(e.precision));
        CHECK(std::isfinite(e.recall));
        CHECK(std::isfinite(e.f1));
        CHECK(e.accuracy == doctest::Approx(0.8));
    }

    TEST_CASE("metrics stay in the unit interval; empty matrix rejected") {
        ConfusionMatrix empty;
        CHECK_THROWS_AS(evaluate(empty), Error);

        CounterRng rng(31);
        for (int trial = 0; trial < 50; ++trial) {
            ConfusionMatrix m;
            for (auto& row : m.counts)
                for (auto& v : row) v = static_cast<long>(rng.next_uniform() * 20);
            if (m.total() == 0) continue;
            const EvalMetrics e = evaluate(m);
            for (double v : {e.precision, e.recall, e.f1, e.accuracy}) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }

    TEST_CASE("accuracy invariant under simultaneous row and column permutation") {
        ConfusionMatrix m;
        m.counts = {{{7, 2, 1}, {3, 9, 0}, {2, 2, 6}}};
        const double base = evaluate(m).accuracy;
        const int perm[3] = {2, 0, 1};
        ConfusionMatrix p;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) p.counts[perm[i]][perm[j]] = m.counts[i][j];
        CHECK(evaluate(p).accuracy == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_SUITE("krippendorff alpha") {
    TEST_CASE("perfect agreement with mixed labels is exactly one") {
        AnnotationSet set;
        for (int u = 0; u < 4; ++u)
            for (int r = 0; r < 3; ++r)
                set.units.push_back({"u" + std::to_string(u), "r" + std::to_string(r),
                                     u % 2 ? PostLabel::IngroupSick : PostLabel::Other});
        CHECK(krippendorff_alpha(set) == 1.0);
    }

    TEST_CASE("worked four-unit two-rater case matches the pair-counting oracle") {
        AnnotationSet set;
        auto add = [&](const std::string& u, const std::string& r, PostLabel l) {
            set.units.push_back({u, r, l});
        };
        const PostLabel a = PostLabel::IngroupSick, b = PostLabel::Other;
        add("1", "r1", a); add("1", "r2", a);
        add("2", "r1", b); add("2", "r2", b);
        add("3", "r1", a); add("3", "r2", b);
        add("4", "r1", b); add("4", "r2", a);

        const double got = krippendorff_alpha(set);
        std::map<std::string, std::vector<int>> by_unit;
        for (const auto& ann : set.units)
            by_unit[ann.unit_id].push_back(static_cast<int>(ann.label));
        const double want = oracle::alpha_pairs(by_unit);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(got == doctest::Approx(0.125).epsilon(1e-12));  // hand-computed
    }

    TEST_CASE("rater identity permutation leaves alpha unchanged") {
        AnnotationSet set;
        const PostLabel labs[3] = {PostLabel::IngroupSick, PostLabel::OutgroupSick,
                                   PostLabel::Other};
        CounterRng rng(5);
        for (int u = 0; u < 6; ++u)
            for (int r = 0; r < 3; ++r)
                set.units.push_back({"u" + std::to_string(u), "r" + std::to_string(r),
                                     labs[static_cast<int>(rng.next_uniform() * 3)]});
        const double base = krippendorff_alpha(set);
        AnnotationSet swapped = set;
        for (auto& ann : swapped.units)
            ann.rater_id = ann.rater_id == "r0" ? "r2" : (ann.rater_id == "r2" ? "r0" : "r1");
        CHECK(krippendorff_alpha(swapped) == doctest::Approx(base).epsilon(1e-12));
    }

    TEST_CASE("category relabeling invariance over random annotation sets") {
        CounterRng rng(77);
        const PostLabel labs[3] = {PostLabel::IngroupSick, PostLabel::OutgroupSick,
                                   PostLabel::Other};
        int checked = 0;
        for (int trial = 0; trial < 100; ++trial) {
            AnnotationSet set;
            const int units = 4 + static_cast<int>(rng.next_uniform() * 6);
            for (int u = 0; u < units; ++u) {
                const int raters = 2 + static_cast<int>(rng.next_uniform() * 3);
                for (int r = 0; r < raters; ++r)
                    set.units.push_back({"u" + std::to_string(u), "r" + std::to_string(r),
                                         labs[static_cast<int>(rng.next_uniform() * 3)]});
            }
            double base;
            try {
                base = krippendorff_alpha(set);
            } catch (const Error&) {
                continue;  // degenerate draw, everything identical
            }
            const int perm[3] = {1, 2, 0};
            AnnotationSet renamed = set;
            for (auto& ann : renamed.units)
                ann.label = labs[perm[static_cast<int>(ann.label)]];
            CHECK(krippendorff_alpha(renamed) == doctest::Approx(base).epsilon(1e-12));
            ++checked;
        }
        CHECK(checked >= 90);
    }

    TEST_CASE("insufficient and degenerate data") {
        AnnotationSet tiny;
        tiny.units = {{"u1", "r1", PostLabel::Other},
                      {"u1", "r2", PostLabel::Other},
                      {"u2", "r1", PostLabel::Other}};  // u2 has a single label
        CHECK_THROWS_AS(krippendorff_alpha(tiny), Error);

        AnnotationSet constant;
        for (int u = 0; u < 3; ++u)
            for (int r = 0; r < 2; ++r)
                constant.units.push_back(
                    {"u" + std::to_string(u), "r" + std::to_string(r), PostLabel::Other});
        CHECK_THROWS_AS(krippendorff_alpha(constant), Error);
    }

    TEST_CASE("duplicate unit-rater pair rejected") {
        AnnotationSet dup;
        dup.units = {{"u1", "r1", PostLabel::Other}, {"u1", "r1", PostLabel::IngroupSick}};
        CHECK_THROWS_AS(krippendorff_alpha(dup), Error);
    }

    TEST_CASE("annotation csv loading") {
        TempFile f(
            "unit_id,rater_id,label\n"
            "1,a,ingroup\n"
            "1,b,outgroup\n"
            "2,a,other\n"
            "2,b,other\n",
            ".csv");
        const AnnotationSet set = load_annotations_csv(f.path);
        CHECK(set.units.size() == 4);
        CHECK(set.units[1].label == PostLabel::OutgroupSick);

        TempFile bad("unit_id,rater_id,label\n1,a,bogus\n", ".csv");
        CHECK_THROWS_AS(load_annotations_csv(bad.path), Error);
    }
}
