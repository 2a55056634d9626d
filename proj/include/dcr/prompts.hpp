#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace dcr {

enum class TemplateId {
    DceSemantic,
    DceSummarization,
    DceParagraph,
    Amc,
    RaiSentence,
    RaiParagraph,
};

inline constexpr std::array<TemplateId, 6> kAllTemplates = {
    TemplateId::DceSemantic, TemplateId::DceSummarization, TemplateId::DceParagraph,
    TemplateId::Amc,         TemplateId::RaiSentence,      TemplateId::RaiParagraph,
};

/// "dce_semantic", "amc", ... (also the template file stem).
std::string_view to_string(TemplateId id);
/// Throws UnknownTemplate.
TemplateId parse_template_id(std::string_view name);

/// Placeholder names each template must contain.
std::set<std::string> required_placeholders(TemplateId id);

/// Names of all `{{name}}` markers in `body`.
std::set<std::string> find_placeholders(std::string_view body);

/// Replaces every `{{name}}` marker in one pass; substituted values are not
/// rescanned. Throws MissingPlaceholderError listing names without a value.
std::string render_template(std::string_view body, const std::map<std::string, std::string>& values);

struct PromptTemplate {
    TemplateId id = TemplateId::DceSummarization;
    std::string body;
    std::set<std::string> required_placeholders;
};

/// Immutable set of the six templates. Defaults are compiled in; `load`
/// overrides any template for which `<dir>/<template_id>.txt` exists.
class PromptRegistry {
public:
    static PromptRegistry defaults();
    static PromptRegistry load(const std::filesystem::path& dir);

    const PromptTemplate& get(TemplateId id) const;

    std::string render(TemplateId id, const std::map<std::string, std::string>& values) const;
    std::string render(std::string_view template_id, const std::map<std::string, std::string>& values) const;

private:
    PromptRegistry() = default;
    void set(TemplateId id, std::string body);

    std::array<PromptTemplate, kAllTemplates.size()> templates_{};
};

}  // namespace dcr
