#include "xkws/synth.hpp"

#include <random>
#include <sstream>

namespace xkws {

namespace {

const std::vector<std::string> kWords = {
    "data",     "query",    "index",     "stream",   "graph",     "mining",   "cache",
    "storage",  "parallel", "semantic",  "ranking",  "sampling",  "join",     "cost",
    "model",    "view",     "schema",    "integration", "privacy", "workload", "cluster",
    "spatial",  "temporal", "learning",  "pattern",  "tree",      "search",   "keyword",
    "optimization", "transaction", "recovery", "replication", "compression", "partition",
    "sensor",   "web",      "document",  "relational", "adaptive", "approximate", "scalable",
    "efficient", "distributed", "probabilistic", "incremental", "benchmark", "provenance",
    "uncertain", "similarity", "skyline",  "top",      "continuous", "federated", "metadata"};

const std::vector<std::string> kFirst = {
    "anna", "boris", "chen", "dana", "elif", "farid", "greta", "hiro", "ines", "jonas",
    "kira", "lars", "mina", "nils", "olga", "pavel", "qing", "rosa", "sven", "tara",
    "umar", "vera", "wei", "xenia", "yusuf", "zora"};

const std::vector<std::string> kLast = {
    "abbott", "baker", "castro", "dietrich", "eriksen", "fischer", "garcia", "haddad",
    "ivanov", "jensen", "kowalski", "lindgren", "moreau", "novak", "okafor", "petrov",
    "quinn", "romano", "schmidt", "tanaka", "ueda", "vargas", "weber", "yamada", "zeller"};

const std::vector<std::string> kVenues = {"vldb", "sigmod", "icde", "edbt", "cikm", "pods",
                                          "kdd", "www", "sigir", "icdt"};
const std::vector<std::string> kJournals = {"tods", "vldbj", "tkde", "is", "dke", "sigrec"};

class Builder {
public:
    explicit Builder(std::uint64_t seed) : rng_(seed) {}

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    const std::string& word() { return kWords[pick(kWords.size())]; }

    std::string title(const std::string& planted = {}) {
        std::string t;
        int n = between(3, 6);
        int at = planted.empty() ? -1 : between(0, n - 1);
        for (int i = 0; i < n; ++i) {
            if (i) t += ' ';
            t += i == at ? planted : word();
        }
        return t;
    }

    void open(const std::string& tag) {
        out_ << '<' << tag << '>';
        ++nodes_;
    }
    void open_keyed(const std::string& tag, const std::string& key) {
        out_ << '<' << tag << " key=\"" << key << "\">";
        nodes_ += 2;
    }
    void close(const std::string& tag) { out_ << "</" << tag << '>'; }
    void leaf(const std::string& tag, const std::string& text) {
        out_ << '<' << tag << '>' << text << "</" << tag << '>';
        ++nodes_;
    }

    void author(const std::string& last = {}) {
        open("author");
        leaf("fn", kFirst[pick(kFirst.size())]);
        leaf("ln", last.empty() ? kLast[pick(kLast.size())] : last);
        close("author");
    }

    /// Paper with an optional planted title term and planted author surname.
    void paper(const std::string& venue, const std::string& in_title = {},
               const std::string& in_author = {}) {
        open_keyed("paper", "conf/" + venue + "/" + std::to_string(serial_++));
        leaf("title", title(in_title));
        int authors = between(1, 3);
        int at = in_author.empty() ? -1 : between(0, authors - 1);
        for (int i = 0; i < authors; ++i) author(i == at ? in_author : std::string{});
        close("paper");
    }

    void article(const std::string& in_title = {}, const std::string& in_author = {}) {
        open_keyed("article", "journals/" + std::to_string(serial_++));
        leaf("title", title(in_title));
        open("authors");
        int authors = between(1, 3);
        int at = in_author.empty() ? -1 : between(0, authors - 1);
        for (int i = 0; i < authors; ++i) author(i == at ? in_author : std::string{});
        close("authors");
        close("article");
    }

    void conf_header(const std::string& venue) {
        open("conf");
        leaf("name", venue);
        leaf("year", std::to_string(between(1995, 2010)));
    }

    void background_conf() {
        const auto& venue = kVenues[pick(kVenues.size())];
        conf_header(venue);
        for (int i = between(5, 10); i > 0; --i) paper(venue);
        close("conf");
    }

    void background_journal() {
        open("journal");
        leaf("name", kJournals[pick(kJournals.size())]);
        for (int i = between(6, 14); i > 0; --i) article();
        close("journal");
    }

    std::size_t nodes() const { return nodes_; }
    std::string str() const { return out_.str(); }

private:
    std::mt19937_64 rng_;
    std::ostringstream out_;
    std::size_t nodes_ = 0;
    int serial_ = 0;
};

std::string term(const char* prefix, int i) {
    std::string n = std::to_string(i);
    return prefix + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

}  // namespace

SynthCorpus generate_dblp_like(std::uint64_t seed, int query_count) {
    Builder b(seed);
    SynthCorpus c;
    b.open("dblp");
    // Background interleaved with planted venues so planted data is not clustered.
    for (int q = 0; q < query_count; ++q) {
        std::string topic = term("topicq", q);
        std::string person = term("authorq", q);
        bool spurious = q % 7 != 0;
        bool journal_plant = q % 3 == 0;

        b.background_conf();
        const auto& venue = kVenues[b.pick(kVenues.size())];
        b.conf_header(venue);
        for (int i = b.between(1, 3); i > 0; --i) b.paper(venue);
        for (int i = b.between(1, 3); i > 0; --i) b.paper(venue, topic, person);
        for (int i = b.between(1, 3); i > 0; --i) b.paper(venue);
        b.close("conf");

        if (spurious) {
            b.conf_header(venue);
            b.paper(venue, topic);
            for (int i = b.between(1, 4); i > 0; --i) b.paper(venue);
            b.paper(venue, {}, person);
            b.close("conf");
        }
        if (journal_plant) {
            b.open("journal");
            b.leaf("name", kJournals[b.pick(kJournals.size())]);
            b.article();
            b.article(topic, person);
            if (spurious) {
                b.article(topic);
                b.article({}, person);
            }
            b.close("journal");
        }
        if (q % 2 == 0) b.background_journal();

        QuerySpec spec;
        spec.id = term("d", q + 1);
        spec.keywords = {topic, person};
        spec.reference_xpath = "/dblp/conf/paper[contains(., \"" + topic + "\")][contains(., \"" +
                               person + "\")]";
        if (journal_plant)
            spec.reference_xpath += " | /dblp/journal/article[contains(., \"" + topic +
                                    "\")][contains(., \"" + person + "\")]";
        c.specs.push_back(std::move(spec));
    }
    while (b.nodes() < 5000) b.nodes() % 3 ? b.background_conf() : b.background_journal();
    b.close("dblp");
    c.xml = b.str();
    c.node_count = b.nodes();
    return c;
}

SynthCorpus generate_scaled(std::uint64_t seed, std::size_t target_nodes) {
    Builder b(seed);
    SynthCorpus c;
    b.open("dblp");
    while (b.nodes() < target_nodes) b.pick(4) ? b.background_conf() : b.background_journal();
    b.close("dblp");
    c.xml = b.str();
    c.node_count = b.nodes();
    return c;
}

}  // namespace xkws
