//! Parser for the order-expression grammar:
//!
//! ```text
//! E ::= fin(<nat>) | omega | sum(E,E) | lex(E,E) | exp(E,E) | rev(E) | tree(<nat>)
//! ```

use crate::error::{Error, Result};
use crate::order::Order;

pub(super) fn parse(src: &str, allow_unsafe_exponent: bool) -> Result<Order> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        allow_unsafe_exponent,
    };
    let order = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.fail("trailing input"));
    }
    Ok(order)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allow_unsafe_exponent: bool,
}

impl Parser<'_> {
    fn fail(&self, what: &str) -> Error {
        Error::ParseOrder(format!(
            "{what} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        ))
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.fail(&format!("expected '{}'", b as char)))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.fail("number out of range"))
    }

    fn expr(&mut self) -> Result<Order> {
        let head = self.ident();
        match head.as_str() {
            "omega" => Ok(Order::omega()),
            "fin" => {
                self.eat(b'(')?;
                let k = self.nat()?;
                self.eat(b')')?;
                Ok(Order::fin(k))
            }
            "tree" => {
                self.eat(b'(')?;
                let d = self.nat()?;
                self.eat(b')')?;
                Order::tree(d)
            }
            "rev" => {
                self.eat(b'(')?;
                let inner = self.expr()?;
                self.eat(b')')?;
                Ok(Order::rev(inner))
            }
            "sum" | "lex" | "exp" => {
                self.eat(b'(')?;
                let left = self.expr()?;
                self.eat(b',')?;
                let right = self.expr()?;
                self.eat(b')')?;
                match head.as_str() {
                    "sum" => Ok(Order::sum(left, right)),
                    "lex" => Ok(Order::lex(left, right)),
                    _ if self.allow_unsafe_exponent => Order::exp_unchecked_exponent(left, right),
                    _ => Order::exp(left, right),
                }
            }
            "" => Err(self.fail("expected an order expression")),
            other => Err(self.fail(&format!("unknown order kind {other:?}"))),
        }
    }
}
