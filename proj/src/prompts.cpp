#include "dcr/prompts.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "dcr/error.hpp"
#include "dcr/resources.hpp"

namespace dcr {

namespace {

constexpr std::string_view kOpen = "{{";
constexpr std::string_view kClose = "}}";

bool is_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        const auto u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || c == '_')) return false;
    }
    return true;
}

std::size_t index_of(TemplateId id) { return static_cast<std::size_t>(id); }

// Calls on_text for literal runs and on_marker for each {{name}}.
template <typename Text, typename Marker>
void scan(std::string_view body, Text on_text, Marker on_marker) {
    std::size_t pos = 0;
    while (pos < body.size()) {
        const auto open = body.find(kOpen, pos);
        if (open == std::string_view::npos) break;
        const auto close = body.find(kClose, open + kOpen.size());
        if (close == std::string_view::npos) break;
        const auto name = body.substr(open + kOpen.size(), close - open - kOpen.size());
        if (!is_name(name)) {
            on_text(body.substr(pos, open + 1 - pos));
            pos = open + 1;
            continue;
        }
        on_text(body.substr(pos, open - pos));
        on_marker(name);
        pos = close + kClose.size();
    }
    on_text(body.substr(pos));
}

}  // namespace

std::string_view to_string(TemplateId id) {
    switch (id) {
        case TemplateId::DceSemantic: return "dce_semantic";
        case TemplateId::DceSummarization: return "dce_summarization";
        case TemplateId::DceParagraph: return "dce_paragraph";
        case TemplateId::Amc: return "amc";
        case TemplateId::RaiSentence: return "rai_sentence";
        case TemplateId::RaiParagraph: return "rai_paragraph";
    }
    return "unknown";
}

TemplateId parse_template_id(std::string_view name) {
    for (auto id : kAllTemplates) {
        if (to_string(id) == name) return id;
    }
    throw Error(ErrorCode::UnknownTemplate, "no template named '" + std::string(name) + "'");
}

std::set<std::string> required_placeholders(TemplateId id) {
    switch (id) {
        case TemplateId::DceSemantic: return {"true_answer", "answer_to_evaluate"};
        case TemplateId::DceSummarization:
        case TemplateId::DceParagraph: return {"article", "summary"};
        case TemplateId::Amc: return {"attempt_answer"};
        case TemplateId::RaiSentence: return {"article", "sentences"};
        case TemplateId::RaiParagraph: return {"article", "summary", "reason"};
    }
    return {};
}

std::set<std::string> find_placeholders(std::string_view body) {
    std::set<std::string> names;
    scan(body, [](std::string_view) {}, [&](std::string_view name) { names.emplace(name); });
    return names;
}

std::string render_template(std::string_view body, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(body.size());
    std::set<std::string> missing;
    scan(
        body, [&](std::string_view text) { out.append(text); },
        [&](std::string_view name) {
            const auto it = values.find(std::string(name));
            if (it == values.end()) {
                missing.emplace(name);
            } else {
                out.append(it->second);
            }
        });
    if (!missing.empty()) throw MissingPlaceholderError({missing.begin(), missing.end()});
    return out;
}

void PromptRegistry::set(TemplateId id, std::string body) {
    auto required = required_placeholders(id);
    const auto present = find_placeholders(body);
    std::vector<std::string> absent;
    for (const auto& name : required) {
        if (present.count(name) == 0) absent.push_back(name);
    }
    if (!absent.empty()) {
        std::string names;
        for (const auto& n : absent) names += (names.empty() ? "" : ", ") + n;
        throw Error(ErrorCode::MissingPlaceholder,
                    "template " + std::string(to_string(id)) + " does not use required placeholder(s) " + names);
    }
    templates_[index_of(id)] = PromptTemplate{id, std::move(body), std::move(required)};
}

PromptRegistry PromptRegistry::defaults() {
    PromptRegistry registry;
    for (auto id : kAllTemplates) {
        const auto name = "prompts/" + std::string(to_string(id)) + ".txt";
        const auto body = embedded_resource(name);
        if (!body) throw Error(ErrorCode::UnknownTemplate, "missing built-in template " + name);
        registry.set(id, std::string(*body));
    }
    return registry;
}

PromptRegistry PromptRegistry::load(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::FileMissing, "prompt directory " + dir.string() + " does not exist");
    }
    auto registry = defaults();
    for (auto id : kAllTemplates) {
        const auto path = dir / (std::string(to_string(id)) + ".txt");
        std::ifstream in(path, std::ios::binary);
        if (!in) continue;
        std::ostringstream body;
        body << in.rdbuf();
        registry.set(id, body.str());
    }
    return registry;
}

const PromptTemplate& PromptRegistry::get(TemplateId id) const { return templates_[index_of(id)]; }

std::string PromptRegistry::render(TemplateId id, const std::map<std::string, std::string>& values) const {
    return render_template(get(id).body, values);
}

std::string PromptRegistry::render(std::string_view template_id, const std::map<std::string, std::string>& values) const {
    return render(parse_template_id(template_id), values);
}

}  // namespace dcr
