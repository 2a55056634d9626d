#include <gtest/gtest.h>

#include "dcr/error.hpp"
#include "dcr/prompts.hpp"
#include "golden_cases.hpp"
#include "support.hpp"

using namespace dcr;
using testing_support::TempDir;

TEST(Prompts, SummarizationRenderPlacesArticleAndSummary) {
    const auto text = PromptRegistry::defaults().render(TemplateId::DceSummarization, {{"article", "A"}, {"summary", "S"}});
    EXPECT_NE(text.find("## Article ##\nA"), std::string::npos);
    EXPECT_NE(text.find("## Summary ##\nS"), std::string::npos);
}

TEST(Prompts, ConverterPromptCarriesWorkedMarks) {
    const auto text = PromptRegistry::defaults().render("amc", {{"attempt_answer", "X"}});
    EXPECT_NE(text.find("[ -1, -1, 1]"), std::string::npos);
    EXPECT_NE(text.find("X"), std::string::npos);
}

TEST(Prompts, MissingValuesAreListed) {
    try {
        PromptRegistry::defaults().render(TemplateId::DceSemantic, {});
        FAIL() << "expected MissingPlaceholder";
    } catch (const MissingPlaceholderError& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingPlaceholder);
        EXPECT_EQ(std::set<std::string>(e.names().begin(), e.names().end()),
                  (std::set<std::string>{"true_answer", "answer_to_evaluate"}));
    }
}

TEST(Prompts, UnknownTemplateIsRejected) {
    try {
        PromptRegistry::defaults().render("dce_poetry", {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownTemplate);
    }
}

TEST(Prompts, DefaultsMatchGoldenFiles) {
    const auto registry = PromptRegistry::defaults();
    for (auto id : kAllTemplates) {
        const auto expected = testing_support::read_text(testing_support::golden_path(id));
        ASSERT_FALSE(expected.empty()) << to_string(id);
        EXPECT_EQ(registry.render(id, testing_support::golden_values_for(id)), expected) << to_string(id);
    }
}

TEST(Prompts, RenderIsSinglePass) {
    EXPECT_EQ(render_template("[{{a}}|{{b}}]", {{"a", "{{b}}"}, {"b", "x"}}), "[{{b}}|x]");
    EXPECT_EQ(find_placeholders("{{a}} {{b_c}} {{a}} {not} {{ spaced }}"), (std::set<std::string>{"a", "b_c"}));
}

TEST(Prompts, RenderIsInjective) {
    const auto registry = PromptRegistry::defaults();
    const auto one = registry.render(TemplateId::DceSummarization, {{"article", "A"}, {"summary", "S1"}});
    const auto two = registry.render(TemplateId::DceSummarization, {{"article", "A"}, {"summary", "S2"}});
    EXPECT_NE(one, two);
    EXPECT_TRUE(find_placeholders(one).empty());
}

TEST(Prompts, DirectoryOverridesSingleTemplates) {
    TempDir dir;
    testing_support::write_text(dir / "amc.txt", "Classify:\n{{attempt_answer}}\n");
    const auto registry = PromptRegistry::load(dir.path());
    EXPECT_EQ(registry.render(TemplateId::Amc, {{"attempt_answer", "r"}}), "Classify:\nr\n");
    EXPECT_EQ(registry.get(TemplateId::DceSemantic).body, PromptRegistry::defaults().get(TemplateId::DceSemantic).body);
}

TEST(Prompts, OverrideMustKeepRequiredPlaceholders) {
    TempDir dir;
    testing_support::write_text(dir / "rai_sentence.txt", "Fix {{sentences}} only\n");
    try {
        PromptRegistry::load(dir.path());
        FAIL() << "expected MissingPlaceholder";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingPlaceholder);
    }
}
