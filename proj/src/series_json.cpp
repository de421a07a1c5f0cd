#include "membrane/series_json.hpp"

namespace membrane {

namespace {

nlohmann::json coeff_json(const Rational& c) { return c.get_str(); }
nlohmann::json coeff_json(double c) { return c; }

void put_key(nlohmann::json& t, const MonomialClass& k) {
    t["word"] = k.word;
    t["sigma2"] = k.sigma2.images();
}

void put_key(nlohmann::json& t, const IndexedMonomial& k) {
    t["word"] = k.word;
    t["sigma2"] = k.sigma2.images();
    if (k.x_split) t["split"] = *k.x_split;
    if (k.y_split) t["vsplit"] = *k.y_split;
}

template <class Key, class Coeff>
nlohmann::json dump(const FormalSeries<Key, Coeff>& s) {
    nlohmann::json j;
    j["truncation"] = s.truncation();
    j["alphabet"] = s.alphabet();
    j["terms"] = nlohmann::json::array();
    for (const auto& [k, c] : s.terms()) {
        nlohmann::json t;
        put_key(t, k);
        t["coeff"] = coeff_json(c);
        j["terms"].push_back(std::move(t));
    }
    return j;
}

Rational parse_rational(const nlohmann::json& c) {
    if (c.is_number_integer()) return Rational(c.get<long>());
    if (!c.is_string()) throw InvalidInput("exact coefficient must be a \"p/q\" string");
    Rational q;
    if (q.set_str(c.get<std::string>(), 10) != 0) throw InvalidInput("bad rational " + c.dump());
    q.canonicalize();
    return q;
}

template <class Coeff, class Parse>
Series<Coeff> load(const nlohmann::json& j, Parse parse) {
    try {
        const int N = j.at("truncation").get<int>();
        int k = j.value("alphabet", 0);
        if (k == 0)
            for (const auto& t : j.at("terms"))
                for (int l : t.at("word")) k = std::max(k, l);
        Series<Coeff> s(std::max(k, 1), N);
        for (const auto& t : j.at("terms")) {
            if (t.contains("split")) throw InvalidInput("indexed terms in a plain series");
            s.add(MonomialClass(t.at("word").get<Word>(),
                                Permutation(t.at("sigma2").get<std::vector<int>>())),
                  parse(t.at("coeff")));
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed series JSON: ") + e.what());
    }
}

}  // namespace

nlohmann::json to_json(const Series<Rational>& s) { return dump(s); }
nlohmann::json to_json(const Series<double>& s) { return dump(s); }
nlohmann::json to_json(const IndexedSeries<Rational>& s) { return dump(s); }
nlohmann::json to_json(const IndexedSeries<double>& s) { return dump(s); }

Series<Rational> rational_series_from_json(const nlohmann::json& j) {
    return load<Rational>(j, parse_rational);
}

Series<double> double_series_from_json(const nlohmann::json& j) {
    return load<double>(j, [](const nlohmann::json& c) {
        if (c.is_string()) return parse_rational(c).get_d();
        return c.get<double>();
    });
}

}  // namespace membrane
