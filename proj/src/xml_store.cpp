#include "xkws/xml_store.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <type_traits>

#include "xkws/error.hpp"

namespace xkws {

namespace {

bool is_token_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

bool all_space(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string label_keyword(const InstanceNode& n) {
    if (n.kind == NodeKind::Attribute && !n.label.empty() && n.label.front() == '@')
        return n.label.substr(1);
    return n.label;
}

void escape_into(std::string& out, std::string_view s, bool attr) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attr) {
                    out += "&quot;";
                    break;
                }
                [[fallthrough]];
            default: out += c;
        }
    }
}

// Builds nodes in preorder from expat callbacks.
struct ParseState {
    std::vector<InstanceNode> nodes;
    std::vector<InodeId> stack;
    std::string pending_text;
    XML_Parser parser = nullptr;

    void flush_text() {
        if (stack.empty() || pending_text.empty()) return;
        if (!all_space(pending_text)) {
            auto& n = nodes[stack.back()];
            n.content.push_back({true, static_cast<std::uint32_t>(n.texts.size())});
            n.texts.push_back(pending_text);
        }
        pending_text.clear();
    }

    InodeId add_node(std::string label, NodeKind kind) {
        InstanceNode n;
        n.id = static_cast<InodeId>(nodes.size());
        n.label = std::move(label);
        n.kind = kind;
        if (!stack.empty()) {
            n.parent = stack.back();
            auto& p = nodes[stack.back()];
            p.children.push_back(n.id);
            p.content.push_back({false, n.id});
        }
        nodes.push_back(std::move(n));
        return nodes.back().id;
    }

    static void on_start(void* ud, const XML_Char* name, const XML_Char** attrs) {
        auto* st = static_cast<ParseState*>(ud);
        st->flush_text();
        if (st->stack.empty() && !st->nodes.empty()) return;  // expat rejects this already
        InodeId el = st->add_node(name, NodeKind::Element);
        st->stack.push_back(el);
        for (int i = 0; attrs[i] != nullptr; i += 2) {
            InodeId a = st->add_node(std::string("@") + attrs[i], NodeKind::Attribute);
            std::string value = attrs[i + 1];
            if (!value.empty()) {
                auto& an = st->nodes[a];
                an.texts.push_back(std::move(value));
                an.content.push_back({true, 0});
            }
        }
    }

    static void on_end(void* ud, const XML_Char*) {
        auto* st = static_cast<ParseState*>(ud);
        st->flush_text();
        st->stack.pop_back();
    }

    static void on_chars(void* ud, const XML_Char* s, int len) {
        auto* st = static_cast<ParseState*>(ud);
        st->pending_text.append(s, static_cast<std::size_t>(len));
    }
};

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_token_char(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && is_token_char(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) out.push_back(normalize_keyword(text.substr(i, j - i), cfg));
        i = j;
    }
    return out;
}

std::string normalize_keyword(std::string_view word, const TokenizerConfig& cfg) {
    std::string s(word);
    if (!cfg.case_sensitive) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    }
    return s;
}

std::vector<std::string> split_query(std::string_view query, const TokenizerConfig& cfg) {
    std::vector<std::string> out;
    std::istringstream in{std::string(query)};
    std::string w;
    while (in >> w) {
        auto k = normalize_keyword(w, cfg);
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
    }
    return out;
}

std::string NodePath::str() const {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(ids[i]);
    }
    return s;
}

LabelPath LabelPath::parse(std::string_view dotted) {
    LabelPath lp;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        auto dot = dotted.find('.', start);
        if (dot == std::string_view::npos) dot = dotted.size();
        if (dot > start) lp.labels.emplace_back(dotted.substr(start, dot - start));
        start = dot + 1;
    }
    return lp;
}

std::string LabelPath::str() const {
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s += '.';
        s += labels[i];
    }
    return s;
}

bool LabelPath::is_prefix_of(const LabelPath& other) const {
    return labels.size() <= other.labels.size() &&
           std::equal(labels.begin(), labels.end(), other.labels.begin());
}

InstanceTree::InstanceTree(std::vector<InstanceNode> nodes, TokenizerConfig cfg)
    : nodes_(std::move(nodes)), cfg_(cfg) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto& n = nodes_[i];
        if (n.id != i) throw ContractError("instance node ids must be dense preorder numbers");
        if (i == 0) {
            if (n.parent) throw ContractError("root must not have a parent");
            n.depth = 0;
        } else {
            if (!n.parent || *n.parent >= i)
                throw ContractError("node " + std::to_string(i) + " must follow its parent");
            n.depth = nodes_[*n.parent].depth + 1;
        }
        n.last_descendant = n.id;
    }
    // Children always carry larger ids, so a reverse sweep finalizes subtree ends.
    for (std::size_t i = nodes_.size(); i-- > 1;) {
        auto& p = nodes_[*nodes_[i].parent];
        p.last_descendant = std::max(p.last_descendant, nodes_[i].last_descendant);
    }
    for (const auto& n : nodes_) {
        InodeId expect = n.id + 1;
        for (InodeId c : n.children) {
            if (c != expect || nodes_[c].parent != n.id)
                throw ContractError("children of node " + std::to_string(n.id) +
                                    " are not in preorder");
            expect = nodes_[c].last_descendant + 1;
        }
    }

    for (const auto& n : nodes_) {
        std::set<std::string> kws;
        for (const auto& t : n.texts)
            for (auto& tok : tokenize(t, cfg_)) kws.insert(std::move(tok));
        if (cfg_.index_labels) kws.insert(normalize_keyword(label_keyword(n), cfg_));
        for (const auto& k : kws) occurrences_[k].push_back(n.id);
    }
}

const InstanceNode& InstanceTree::node(InodeId id) const {
    if (!contains(id)) throw NotFound("no instance node " + std::to_string(id));
    return nodes_[id];
}

NodePath InstanceTree::node_path(InodeId id) const {
    NodePath p;
    p.ids.resize(node(id).depth + 1);
    for (std::optional<InodeId> cur = id; cur; cur = nodes_[*cur].parent)
        p.ids[nodes_[*cur].depth] = *cur;
    return p;
}

LabelPath InstanceTree::label_path(InodeId id) const {
    LabelPath lp;
    lp.labels.resize(node(id).depth + 1);
    for (std::optional<InodeId> cur = id; cur; cur = nodes_[*cur].parent)
        lp.labels[nodes_[*cur].depth] = nodes_[*cur].label;
    return lp;
}

std::vector<InodeId> InstanceTree::subtree_ids(InodeId id) const {
    const auto& n = node(id);
    std::vector<InodeId> out(n.last_descendant - id + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = id + static_cast<InodeId>(i);
    return out;
}

bool InstanceTree::is_ancestor_or_self(InodeId ancestor, InodeId n) const {
    return ancestor <= n && n <= node(ancestor).last_descendant;
}

std::span<const InodeId> InstanceTree::occurrences(const std::string& keyword) const {
    auto it = occurrences_.find(keyword);
    if (it == occurrences_.end()) return {};
    return it->second;
}

std::vector<std::string> InstanceTree::keywords_of(InodeId id) const {
    const auto& n = node(id);
    std::set<std::string> kws;
    for (const auto& t : n.texts)
        for (auto& tok : tokenize(t, cfg_)) kws.insert(std::move(tok));
    if (cfg_.index_labels) kws.insert(normalize_keyword(label_keyword(n), cfg_));
    return {kws.begin(), kws.end()};
}

std::string InstanceTree::to_xml(InodeId id) const {
    const auto& n = node(id);
    std::string out;
    if (n.kind == NodeKind::Attribute) {
        // A lone attribute renders as name="value".
        out += n.label.substr(1) + "=\"";
        if (!n.texts.empty()) escape_into(out, n.texts.front(), true);
        out += '"';
        return out;
    }
    out += '<' + n.label;
    for (InodeId c : n.children) {
        const auto& cn = nodes_[c];
        if (cn.kind != NodeKind::Attribute) continue;
        out += ' ' + cn.label.substr(1) + "=\"";
        if (!cn.texts.empty()) escape_into(out, cn.texts.front(), true);
        out += '"';
    }
    bool has_body = std::any_of(n.content.begin(), n.content.end(), [&](const ContentItem& ci) {
        return ci.is_text || nodes_[ci.ref].kind != NodeKind::Attribute;
    });
    if (!has_body) return out + "/>";
    out += '>';
    for (const auto& ci : n.content) {
        if (ci.is_text) {
            escape_into(out, n.texts[ci.ref], false);
        } else if (nodes_[ci.ref].kind != NodeKind::Attribute) {
            out += to_xml(ci.ref);
        }
    }
    out += "</" + n.label + '>';
    return out;
}

InstanceTree parse_document(std::string_view xml_text, const TokenizerConfig& cfg) {
    if (all_space(xml_text)) throw ParseError("empty document", 0);

    ParseState st;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), &XML_ParserFree);
    if (!parser) throw Error("cannot allocate XML parser");
    st.parser = parser.get();
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), &ParseState::on_start, &ParseState::on_end);
    XML_SetCharacterDataHandler(parser.get(), &ParseState::on_chars);

    if (XML_Parse(parser.get(), xml_text.data(), static_cast<int>(xml_text.size()), 1) ==
        XML_STATUS_ERROR) {
        auto offset = XML_GetCurrentByteIndex(parser.get());
        throw ParseError(XML_ErrorString(XML_GetErrorCode(parser.get())),
                         offset < 0 ? 0 : static_cast<std::size_t>(offset));
    }
    if (st.nodes.empty()) throw ParseError("empty document", 0);
    return InstanceTree(std::move(st.nodes), cfg);
}

InstanceTree parse_file(const std::filesystem::path& path, const TokenizerConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str(), cfg);
}

}  // namespace xkws
