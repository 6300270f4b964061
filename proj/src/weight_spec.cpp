#include "weaklab/weight_spec.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "weaklab/errors.hpp"

namespace weaklab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    WeightSpec parse_all() {
        WeightSpec spec = parse(false);
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return spec;
    }

private:
    WeightSpec parse(bool nested) {
        if (eat("const:c=")) return constant_weight(number());
        if (eat("power:delta=")) return power_weight(number());
        if (eat("step:alpha=")) return step_weight(number());
        if (eat("csv:")) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && !(nested && (text_[pos_] == ',' || text_[pos_] == ')'))) ++pos_;
            if (pos_ == start) fail("empty csv path");
            return WeightSpec{CsvSpec{std::string(text_.substr(start, pos_ - start))}};
        }
        if (eat("prod:(")) {
            WeightSpec left = parse(true);
            if (!eat(",")) fail("expected ','");
            WeightSpec right = parse(true);
            if (!eat(")")) fail("expected ')'");
            return product_weight(std::move(left), std::move(right));
        }
        fail("unknown weight spec");
    }

    double number() {
        double x = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, x);
        if (ec != std::errc{} || ptr == first) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return x;
    }

    bool eat(std::string_view token) {
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) const {
        std::string_view rest = text_.substr(pos_);
        const auto cut = rest.find_first_of(",)");
        const std::string token(rest.substr(0, cut == std::string_view::npos ? rest.size() : std::max<std::size_t>(cut, 1)));
        throw UsageError("bad weight spec '" + std::string(text_) + "': " + why + " at '" + token + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

WeightSpec constant_weight(double c) { return WeightSpec{ConstantSpec{c}}; }
WeightSpec power_weight(double delta) { return WeightSpec{PowerSpec{delta}}; }
WeightSpec step_weight(double alpha) { return WeightSpec{StepSpec{alpha}}; }
WeightSpec piecewise_weight(std::vector<double> values) { return WeightSpec{PiecewiseSpec{std::move(values)}}; }
WeightSpec product_weight(WeightSpec left, WeightSpec right) {
    return WeightSpec{ProductSpec{std::make_shared<const WeightSpec>(std::move(left)),
                                  std::make_shared<const WeightSpec>(std::move(right))}};
}

void validate(const WeightSpec& spec) {
    std::visit(overloaded{
                   [](const ConstantSpec& s) {
                       if (!(s.c > 0.0) || !std::isfinite(s.c))
                           throw ConfigError("const weight needs c > 0, got " + format_number(s.c));
                   },
                   [](const PowerSpec& s) {
                       if (!(s.delta > 0.0 && s.delta < 1.0))
                           throw ConfigError("power weight needs 0 < delta < 1, got " + format_number(s.delta));
                   },
                   [](const StepSpec& s) {
                       if (!(s.alpha > 0.0 && s.alpha <= 1.0))
                           throw ConfigError("step weight needs 0 < alpha <= 1, got " + format_number(s.alpha));
                   },
                   [](const PiecewiseSpec& s) {
                       for (std::size_t i = 0; i < s.values.size(); ++i)
                           if (!(s.values[i] > 0.0) || !std::isfinite(s.values[i]))
                               throw ConfigError("piecewise weight value " + std::to_string(i) + " is not positive");
                   },
                   [](const CsvSpec& s) {
                       if (s.path.empty()) throw ConfigError("csv weight needs a path");
                   },
                   [](const ProductSpec& s) {
                       if (!s.left || !s.right) throw ConfigError("product weight with a missing factor");
                       validate(*s.left);
                       validate(*s.right);
                   },
               },
               spec.kind);
}

WeightSpec parse_weight_spec(std::string_view text) {
    WeightSpec spec = SpecParser(text).parse_all();
    try {
        validate(spec);
    } catch (const ConfigError& e) {
        throw UsageError(std::string("bad weight spec '") + std::string(text) + "': " + e.what());
    }
    return spec;
}

std::string to_string(const WeightSpec& spec) {
    return std::visit(overloaded{
                          [](const ConstantSpec& s) { return "const:c=" + format_number(s.c); },
                          [](const PowerSpec& s) { return "power:delta=" + format_number(s.delta); },
                          [](const StepSpec& s) { return "step:alpha=" + format_number(s.alpha); },
                          [](const PiecewiseSpec& s) {
                              return "piecewise[" + std::to_string(s.values.size()) + "]";
                          },
                          [](const CsvSpec& s) { return "csv:" + s.path; },
                          [](const ProductSpec& s) {
                              return "prod:(" + to_string(*s.left) + "," + to_string(*s.right) + ")";
                          },
                      },
                      spec.kind);
}

}  // namespace weaklab
