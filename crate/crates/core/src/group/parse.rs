//! Group-descriptor grammar.

use super::hall::PrimeColouring;
use super::GroupModel;
use crate::error::{Error, Result};
use crate::int::Int;
use std::sync::Arc;

struct P<'a> {
    s: &'a [u8],
    i: usize,
}

impl P<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(t.as_bytes()) {
            self.i += t.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.i, msg: msg.to_string() })
    }

    fn int(&mut self) -> Result<Int> {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if st == self.i {
            return self.err("expected integer");
        }
        Ok(std::str::from_utf8(&self.s[st..self.i]).unwrap().parse().unwrap())
    }

    fn small(&mut self) -> Result<usize> {
        let v = self.int()?;
        usize::try_from(v).or_else(|_| self.err("integer too large"))
    }

    fn expr(&mut self) -> Result<GroupModel> {
        let mut left = self.postfix()?;
        loop {
            self.ws();
            if self.eat("wrXGrig") {
                left = GroupModel::PermWreathGrig(Box::new(left));
            } else if self.eat("wr") {
                let r = self.postfix()?;
                left = GroupModel::wreath(left, r);
            } else if self.eat("x") {
                let r = self.postfix()?;
                left = match (left, r) {
                    (GroupModel::FinAbelian(mut a), GroupModel::FinAbelian(b)) => {
                        a.extend(b);
                        GroupModel::FinAbelian(a)
                    }
                    (a, b) => GroupModel::direct(a, b),
                };
            } else if self.eat("*") {
                let r = self.postfix()?;
                left = GroupModel::free_prod(left, r);
            } else {
                return Ok(left);
            }
        }
    }

    fn postfix(&mut self) -> Result<GroupModel> {
        let mut g = self.primary()?;
        while self.eat("wrXGrig") {
            g = GroupModel::PermWreathGrig(Box::new(g));
        }
        Ok(g)
    }

    fn primary(&mut self) -> Result<GroupModel> {
        self.ws();
        if self.eat("(") {
            let g = self.expr()?;
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            return Ok(g);
        }
        if self.eat("Grig") {
            return Ok(GroupModel::Grigorchuk);
        }
        if self.eat("BS(1,") {
            let p = self.int()?;
            if p < Int::from(2) {
                return self.err("BS(1,p) needs p >= 2");
            }
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            return Ok(GroupModel::BaumslagSolitar(p));
        }
        if self.eat("FM") {
            let k = self.small()?;
            return Ok(GroupModel::FreeMetabelian(k));
        }
        if self.eat("Hall(") {
            self.ws();
            let st = self.i;
            while self.i < self.s.len() && self.s[self.i] != b')' {
                self.i += 1;
            }
            let arg = std::str::from_utf8(&self.s[st..self.i]).unwrap().trim().to_string();
            if !self.eat(")") {
                return self.err("expected ')'");
            }
            let phi = match arg.as_str() {
                "free" => PrimeColouring { default: 0, ..Default::default() },
                "trivial" => PrimeColouring::default(),
                path => {
                    let text = std::fs::read_to_string(path)?;
                    PrimeColouring::from_json(&serde_json::from_str(&text)?)?
                }
            };
            return Ok(GroupModel::Hall(Arc::new(phi)));
        }
        if self.eat("N2_") {
            let k = self.small()?;
            let n = if self.eat("/") { self.int()? } else { Int::from(0) };
            return Ok(GroupModel::NilC2 { rank: k, modulus: n });
        }
        if self.eat("F") {
            let k = self.small()?;
            return Ok(GroupModel::Free(k));
        }
        if self.eat("Z") {
            if self.eat("^") {
                let n = self.small()?;
                return Ok(GroupModel::FinAbelian(vec![Int::from(0); n]));
            }
            if self.eat("/") {
                let n = self.int()?;
                if n < Int::from(1) {
                    return self.err("Z/n needs n >= 1");
                }
                return Ok(GroupModel::FinAbelian(vec![n]));
            }
            return Ok(GroupModel::FinAbelian(vec![Int::from(0)]));
        }
        self.err("expected group descriptor")
    }
}

pub fn parse_group(text: &str) -> Result<GroupModel> {
    let mut p = P { s: text.as_bytes(), i: 0 };
    let g = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return p.err("unexpected trailing input");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse_group("Z^2 x Z/6").unwrap(), GroupModel::abelian(&[0, 0, 6]));
        assert_eq!(
            parse_group("(F2) wr (Z)").unwrap(),
            GroupModel::wreath(GroupModel::Free(2), GroupModel::abelian(&[0]))
        );
        assert_eq!(parse_group("N2_2/5").unwrap(), GroupModel::nil(2, 5));
        assert_eq!(parse_group("BS(1,2)").unwrap(), GroupModel::BaumslagSolitar(Int::from(2)));
        assert_eq!(
            parse_group("(Z/2)wrXGrig").unwrap(),
            GroupModel::PermWreathGrig(Box::new(GroupModel::abelian(&[2])))
        );
        assert_eq!(
            parse_group("(N2_2)x(N2_2)").unwrap(),
            GroupModel::direct(GroupModel::nil(2, 0), GroupModel::nil(2, 0))
        );
        assert!(matches!(parse_group("(F2)*(Z)").unwrap(), GroupModel::FreeProd(..)));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_group("Q"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_group("Z^2 x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_group("BS(1,1)"), Err(Error::Syntax { .. })));
    }
}
