//! Rendering of sums of monomials in the `c*x^k + ...` style used across the
//! crate (decreasing degrees, unit coefficients dropped, compound
//! coefficients parenthesized).

/// Render nonzero terms `(exponent, coefficient)` as a polynomial in `var`.
///
/// Terms may come in any order; they are printed by decreasing exponent.
/// An empty term list renders as `"0"`.
pub(crate) fn render_terms(mut terms: Vec<(usize, String)>, var: &str) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(e, c)| render_term(e, &c, var))
        .collect();
    parts.join(" + ")
}

fn render_term(exp: usize, coeff: &str, var: &str) -> String {
    let monomial = match exp {
        0 => return coeff.to_string(),
        1 => var.to_string(),
        e => format!("{var}^{e}"),
    };
    if coeff == "1" {
        monomial
    } else if is_compound(coeff) {
        format!("({coeff})*{monomial}")
    } else {
        format!("{coeff}*{monomial}")
    }
}

/// A rendered coefficient needs parentheses when it is itself a sum or a
/// quotient.
pub(crate) fn is_compound(s: &str) -> bool {
    s.contains(' ') || s.contains('/')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_like_the_reference_display() {
        let terms = vec![
            (0, "z".to_string()),
            (3, "z".to_string()),
            (2, "1".to_string()),
        ];
        assert_eq!(render_terms(terms, "t"), "z*t^3 + t^2 + z");
        let terms = vec![(1, "2*z^2 + 3*z + 4".to_string()), (0, "1".to_string())];
        assert_eq!(render_terms(terms, "t"), "(2*z^2 + 3*z + 4)*t + 1");
        assert_eq!(render_terms(vec![], "t"), "0");
    }
}
