use super::{Code, FpPoly, RingError, RingKind, RingSpec};

fn syntax(input: &str, reason: impl Into<String>) -> RingError {
    RingError::Syntax {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Splits on a separator occurring outside any bracket pair.
fn split_top_level<'a>(text: &'a str, sep: &str) -> Vec<&'a str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && text[i..].starts_with(sep) {
            parts.push(&text[start..i]);
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    parts.push(&text[start..]);
    parts
}

pub(super) fn parse_ring_spec(text: &str) -> Result<RingSpec, RingError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(syntax(text, "empty ring spec"));
    }
    let parts = split_top_level(trimmed, " x ");
    let mut rings = Vec::with_capacity(parts.len());
    for part in parts {
        rings.push(parse_atom(part.trim(), text)?);
    }
    if rings.len() == 1 {
        Ok(rings.pop().unwrap())
    } else {
        RingSpec::product(rings)
    }
}

fn parse_uint(s: &str, whole: &str) -> Result<u64, RingError> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| syntax(whole, format!("expected a positive integer, found `{s}`")))
}

fn parse_atom(atom: &str, whole: &str) -> Result<RingSpec, RingError> {
    if let Some(rest) = atom.strip_prefix("Z/") {
        return RingSpec::zmod(parse_uint(rest, whole)?);
    }
    if let Some(rest) = atom.strip_prefix("GF(") {
        let close = rest
            .find(')')
            .ok_or_else(|| syntax(whole, "unclosed `GF(`"))?;
        let q = parse_uint(&rest[..close], whole)?;
        let tail = rest[close + 1..].trim();
        if tail.is_empty() {
            return RingSpec::gf(q);
        }
        let poly_src = tail
            .strip_prefix("[x]/(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| syntax(whole, "expected `[x]/(<poly>)` after `GF(p)`"))?;
        if !super::is_prime(q) {
            return Err(RingError::NotPrime(q));
        }
        let f = parse_poly(poly_src, q).map_err(|r| syntax(whole, r))?;
        return RingSpec::poly_quotient(q, f);
    }
    Err(syntax(whole, format!("unknown ring constructor `{atom}`")))
}

/// Polynomial expressions in `x` with `+`, `-`, juxtaposition/`*`, `^` and
/// parentheses, e.g. `x^3+x+1` or `x^2(x+1)`.
pub(crate) fn parse_poly(src: &str, p: u64) -> Result<FpPoly, String> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut parser = PolyParser { chars, pos: 0, p };
    let f = parser.expr()?;
    if parser.pos != parser.chars.len() {
        return Err(format!("unexpected `{}` in polynomial", parser.chars[parser.pos]));
    }
    Ok(f)
}

struct PolyParser {
    chars: Vec<char>,
    pos: usize,
    p: u64,
}

impl PolyParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<FpPoly, String> {
        let mut acc = if self.peek() == Some('-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FpPoly, String> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            if c == '*' {
                self.pos += 1;
                acc = acc.mul(&self.factor()?);
            } else if c == '(' || c == 'x' || c.is_ascii_digit() {
                acc = acc.mul(&self.factor()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FpPoly, String> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.number()?;
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64, String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| "expected a number".to_string())
    }

    fn primary(&mut self) -> Result<FpPoly, String> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok(FpPoly::new(self.p, vec![0, 1]))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err("unclosed parenthesis".into());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(FpPoly::new(self.p, vec![n % self.p]))
            }
            Some(c) => Err(format!("unexpected `{c}`")),
            None => Err("unexpected end of polynomial".into()),
        }
    }
}

fn bad(ring: &RingSpec, input: &str, reason: impl Into<String>) -> RingError {
    RingError::BadElement {
        input: input.to_string(),
        ring: ring.to_string(),
        reason: reason.into(),
    }
}

/// Element strings: decimal residues (signs allowed), coefficient lists
/// low-degree first, or per-factor tuples. A bare integer is accepted in
/// every ring as the image of that integer.
pub(super) fn parse_element(ring: &RingSpec, text: &str) -> Result<Code, RingError> {
    let t = text.trim();
    if let Ok(v) = t.parse::<i64>() {
        return Ok(ring.from_int(v));
    }
    match ring.kind() {
        RingKind::Zmod { .. } => Err(bad(ring, text, "expected an integer")),
        RingKind::Poly { p, modulus, degree } => {
            let inner = t
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| bad(ring, text, "expected a coefficient list `[c0,c1,...]`"))?;
            let mut coeffs = Vec::new();
            for c in inner.split(',').filter(|c| !c.trim().is_empty()) {
                let v: i64 = c
                    .trim()
                    .parse()
                    .map_err(|_| bad(ring, text, format!("bad coefficient `{c}`")))?;
                coeffs.push(v.rem_euclid(*p as i64) as u64);
            }
            if coeffs.len() > *degree {
                return Ok(FpPoly::new(*p, coeffs).rem(modulus).to_code() as Code);
            }
            Ok(FpPoly::new(*p, coeffs).to_code() as Code)
        }
        RingKind::Product { factors, .. } => {
            let inner = t
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| bad(ring, text, "expected a tuple `(a,b,...)`"))?;
            let parts = split_top_level(inner, ",");
            if parts.len() != factors.len() {
                return Err(bad(
                    ring,
                    text,
                    format!("expected {} components, found {}", factors.len(), parts.len()),
                ));
            }
            let codes: Result<Vec<Code>, RingError> = factors
                .iter()
                .zip(parts)
                .map(|(f, part)| f.parse_element(part))
                .collect();
            Ok(ring.join(&codes?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_ring_spec("Z/12").unwrap().to_string(), "Z/12");
        assert_eq!(parse_ring_spec("GF(9)").unwrap().size(), 9);
        assert_eq!(
            parse_ring_spec("GF(2)[x]/(x^2(x+1))").unwrap().to_string(),
            "GF(2)[x]/(x^3+x^2)"
        );
        let p = parse_ring_spec("Z/2 x Z/3 x GF(4)").unwrap();
        assert_eq!(p.factors().len(), 3);
        assert_eq!(p.size(), 24);
    }

    #[test]
    fn grammar_errors() {
        assert!(matches!(parse_ring_spec("Q/3"), Err(RingError::Syntax { .. })));
        assert!(matches!(parse_ring_spec("Z/1"), Err(RingError::ModulusTooSmall(1))));
        assert!(matches!(parse_ring_spec("GF(2)[x]/(x^2+"), Err(RingError::Syntax { .. })));
        assert!(matches!(parse_ring_spec("GF(12)"), Err(RingError::NotPrimePower(12))));
    }

    #[test]
    fn elements_round_trip() {
        let r = parse_ring_spec("Z/4 x GF(9)").unwrap();
        for a in r.elements() {
            assert_eq!(r.parse_element(&r.format_element(a)).unwrap(), a);
        }
        assert_eq!(r.parse_element("-1").unwrap(), r.neg(r.one()));
    }
}
