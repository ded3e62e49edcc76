//! Text form of bundle expressions.
//!
//! ```text
//! expr    := 'K' '*' expr | product
//! product := term ('*' term)*
//! term    := '(' expr ')' | func ['<' ints '>'] '(' expr ')' | ident ['{' props '}']
//! func    := dual | det | sym | wedge | schur | pow | twist
//! props   := prop (',' prop)*
//! prop    := n=INT | r=INT | line | griffiths_k=INT | ks_positive=INT:INT | nakano
//!          | k_positive=INT | k_ample=INT | semipositive | ample
//! ```
//!
//! An atom's properties are given once, at its first occurrence; later
//! occurrences refer back to it by name.

use std::collections::BTreeMap;

use super::expr::{Atom, BundleExpr};
use super::facts::FactKind;
use crate::error::{Error, Result};
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub expr: BundleExpr,
    /// Base dimension, if some atom declared `n=`.
    pub n: Option<usize>,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    atoms: BTreeMap<String, Atom>,
    n: Option<usize>,
}

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(format!("expected '{}' at offset {}", c as char, self.pos))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            return err(format!("expected a name at offset {start}"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse().map_err(|_| Error::Parse(format!("expected an integer at offset {start}")))
    }

    fn uint(&mut self) -> Result<usize> {
        let v = self.int()?;
        usize::try_from(v).map_err(|_| Error::Parse(format!("expected a nonnegative integer, got {v}")))
    }

    fn expr(&mut self) -> Result<BundleExpr> {
        self.skip_ws();
        let save = self.pos;
        if self.src.get(self.pos) == Some(&b'K') {
            self.pos += 1;
            if self.eat(b'*') {
                return Ok(self.expr()?.canonical_twist());
            }
            self.pos = save;
        }
        self.product()
    }

    fn product(&mut self) -> Result<BundleExpr> {
        let mut acc = self.term()?;
        while self.eat(b'*') {
            acc = acc.tensor(self.term()?);
        }
        Ok(acc)
    }

    fn args(&mut self) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        if self.eat(b'<') {
            loop {
                out.push(self.int()?);
                if self.eat(b'>') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        Ok(out)
    }

    fn one_arg(name: &str, args: &[i64]) -> Result<i64> {
        match args {
            [x] => Ok(*x),
            _ => err(format!("{name} takes exactly one parameter")),
        }
    }

    fn nonneg(name: &str, args: &[i64]) -> Result<usize> {
        let v = Self::one_arg(name, args)?;
        usize::try_from(v).map_err(|_| Error::Parse(format!("{name} parameter must be nonnegative")))
    }

    fn term(&mut self) -> Result<BundleExpr> {
        if self.eat(b'(') {
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        let name = self.ident()?;
        let func = matches!(name.as_str(), "dual" | "det" | "sym" | "wedge" | "schur" | "pow" | "twist");
        if func && matches!(self.peek(), Some(b'(') | Some(b'<')) {
            let args = self.args()?;
            self.expect(b'(')?;
            let inner = self.expr()?;
            self.expect(b')')?;
            return match name.as_str() {
                "dual" | "det" if !args.is_empty() => err(format!("{name} takes no parameters")),
                "dual" => Ok(inner.dual()),
                "det" => Ok(inner.det()),
                "sym" => Ok(inner.sym(Self::nonneg("sym", &args)?)),
                "wedge" => Ok(inner.wedge(Self::nonneg("wedge", &args)?)),
                "pow" => Ok(inner.pow(Self::nonneg("pow", &args)?)),
                "twist" => Ok(inner.det_twist(Self::one_arg("twist", &args)?)),
                _ => {
                    if args.is_empty() {
                        return err("schur needs a weight");
                    }
                    Ok(inner.schur(Weight(args)))
                }
            };
        }
        self.atom(name)
    }

    fn atom(&mut self, name: String) -> Result<BundleExpr> {
        if name == "K" {
            return err("K must be followed by '*'");
        }
        if !self.eat(b'{') {
            return match self.atoms.get(&name) {
                Some(a) => Ok(BundleExpr::atom(a.clone())),
                None => err(format!("atom {name} is used before its properties are given")),
            };
        }
        if self.atoms.contains_key(&name) {
            return err(format!("atom {name} is declared twice"));
        }
        let mut rank = None;
        let mut line = false;
        let mut facts = Vec::new();
        if !self.eat(b'}') {
            loop {
                let key = self.ident()?;
                match key.as_str() {
                    "line" => line = true,
                    "nakano" => facts.push(FactKind::NakanoPositive),
                    "semipositive" => facts.push(FactKind::SemipositiveLine),
                    "ample" => facts.push(FactKind::AmpleLine),
                    _ => {
                        self.expect(b'=')?;
                        let v = self.uint()?;
                        match key.as_str() {
                            "n" => match self.n {
                                Some(m) if m != v => return err(format!("conflicting base dimensions {m} and {v}")),
                                _ => self.n = Some(v),
                            },
                            "r" => rank = Some(v),
                            "griffiths_k" => facts.push(FactKind::GriffithsK { k: v }),
                            "k_positive" => facts.push(FactKind::KPositiveLine { k: v }),
                            "k_ample" => facts.push(FactKind::KAmple { k: v }),
                            "ks_positive" => {
                                self.expect(b':')?;
                                facts.push(FactKind::KsPositive { k: v, s: self.uint()? });
                            }
                            _ => return err(format!("unknown property {key}")),
                        }
                    }
                }
                if self.eat(b'}') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        let rank = match (line, rank) {
            (true, Some(r)) if r != 1 => return err(format!("line atom {name} declared with rank {r}")),
            (true, _) => 1,
            (false, Some(r)) => r,
            (false, None) => return err(format!("atom {name} needs r= or line")),
        };
        let a = Atom::new(&name, rank, facts);
        self.atoms.insert(name, a.clone());
        Ok(BundleExpr::atom(a))
    }
}

pub fn parse_expr(text: &str) -> Result<Parsed> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, atoms: BTreeMap::new(), n: None };
    let expr = p.expr()?;
    if p.peek().is_some() {
        return err(format!("unexpected input at offset {}", p.pos));
    }
    expr.rank()?;
    Ok(Parsed { expr, n: p.n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_and_operators() {
        let p = parse_expr("K*E{n=3,r=2,griffiths_k=1} * det(E)").unwrap();
        assert_eq!(p.n, Some(3));
        assert_eq!(p.expr.to_string(), "K*E * det(E)");
        let e = Atom::new("E", 2, vec![FactKind::GriffithsK { k: 1 }]);
        let x = BundleExpr::atom(e);
        assert_eq!(p.expr, x.clone().tensor(x.det()).canonical_twist());
    }

    #[test]
    fn printed_forms() {
        for (text, shown) in [
            (
                "schur<2,1,0>(E{r=3,ks_positive=1:2}) * pow<2>(det(E)) * B{line,semipositive}",
                "schur<2,1,0>(E) * pow<2>(det(E)) * B",
            ),
            ("dual(E{r=2,nakano}) * twist<-1>(E)", "dual(E) * twist<-1>(E)"),
            ("sym<3>(wedge<2>(E{r=4,k_ample=0}))", "sym<3>(wedge<2>(E))"),
            ("K*(L{line,k_positive=1})", "K*L"),
        ] {
            assert_eq!(parse_expr(text).unwrap().expr.to_string(), shown);
        }
    }

    #[test]
    fn errors() {
        for bad in [
            "E",
            "E{r=2} * E{r=2}",
            "E{line,r=2}",
            "E{r=2,foo}",
            "wedge<3>(E{r=2})",
            "schur<0,1>(E{r=2})",
            "sym(E{r=2})",
            "det<1>(E{r=2})",
            "E{r=2} E",
            "K",
            "E{n=2,r=1} * F{n=3,r=1}",
            "(E{r=2}",
        ] {
            assert!(matches!(parse_expr(bad), Err(Error::Parse(_)) | Err(Error::InvalidInput(_))), "{bad}");
        }
    }
}
