#include "tinv/scalar.hpp"

#include "tinv/errors.hpp"

namespace tinv {

std::string to_decimal(const BigInt& v) { return v.get_str(10); }

BigInt parse_bigint(const std::string& text)
{
    if (text.empty())
        throw DomainError("empty integer literal");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size())
        throw DomainError("malformed integer literal '" + text + "'");
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw DomainError("malformed integer literal '" + text + "'");
    }
    BigInt out;
    out.set_str(text[0] == '+' ? text.substr(1) : text, 10);
    return out;
}

ExactScalar make_scalar(const BigInt& num, const BigInt& den)
{
    if (den == 0)
        throw DomainError("zero denominator");
    ExactScalar q(num, den);
    q.canonicalize();
    return q;
}

ExactScalar make_scalar(const std::string& num, const std::string& den)
{
    return make_scalar(parse_bigint(num), parse_bigint(den));
}

bool is_integer(const ExactScalar& v) { return v.get_den() == 1; }

BigInt factorial(unsigned n)
{
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

BigInt binomial(unsigned n, unsigned k)
{
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

} // namespace tinv
