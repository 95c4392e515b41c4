//! Pointwise complex expressions over the coordinates of a space.
//!
//! Grammar: `+ - * /`, integer powers `^n`, parentheses, decimal numbers,
//! the imaginary unit `i`, coordinates `z` (first) or `z0`, `z1`, ..., and
//! the functions `conj`, `abs`, `exp`, `sqrt`.

use uaext::C64;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(C64),
    Coord(usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Conj,
    Abs,
    Exp,
    Sqrt,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| format!("bad number `{text}`"))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, String> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        match self.toks.get(self.pos) {
            Some(Tok::Num(v)) if v.fract() == 0.0 && v.abs() <= 64.0 => {
                let n = *v as i32;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
            }
            _ => Err("exponent must be an integer between -64 and 64".into()),
        }
    }

    fn primary(&mut self) -> Result<Expr, String> {
        let tok = self.toks.get(self.pos).cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Expr::Num(C64::new(v, 0.0))),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                Ok(e)
            }
            Tok::Op(c) => Err(format!("unexpected `{c}`")),
            Tok::Ident(name) => {
                let func = match name.as_str() {
                    "conj" => Some(Func::Conj),
                    "abs" => Some(Func::Abs),
                    "exp" => Some(Func::Exp),
                    "sqrt" => Some(Func::Sqrt),
                    _ => None,
                };
                if let Some(f) = func {
                    if !self.eat('(') {
                        return Err(format!("`{name}` needs an argument in parentheses"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err("missing `)`".into());
                    }
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "i" => Ok(Expr::Num(C64::new(0.0, 1.0))),
                    "pi" => Ok(Expr::Num(C64::new(std::f64::consts::PI, 0.0))),
                    "z" => Ok(Expr::Coord(0)),
                    _ => match name.strip_prefix('z').and_then(|k| k.parse::<usize>().ok()) {
                        Some(k) => Ok(Expr::Coord(k)),
                        None => Err(format!("unknown name `{name}`")),
                    },
                }
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, String> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input after token {}", p.pos));
    }
    Ok(e)
}

impl Expr {
    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Coord(k) => Some(*k),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Call(_, e) => e.max_coord(),
            Expr::Bin(_, a, b) => a.max_coord().max(b.max_coord()),
        }
    }

    pub fn eval(&self, coords: &[C64]) -> C64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Coord(k) => coords[*k],
            Expr::Neg(e) => -e.eval(coords),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(coords), b.eval(coords));
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    _ => a / b,
                }
            }
            Expr::Pow(e, n) => e.eval(coords).powi(*n),
            Expr::Call(f, e) => {
                let v = e.eval(coords);
                match f {
                    Func::Conj => v.conj(),
                    Func::Abs => C64::new(v.norm(), 0.0),
                    Func::Exp => v.exp(),
                    Func::Sqrt => v.sqrt(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_powers() {
        let e = parse("-z^2 + 3*z1 - (1 - i)/2").unwrap();
        let v = e.eval(&[C64::new(2.0, 0.0), C64::new(0.0, 1.0)]);
        assert!((v - C64::new(-4.5, 3.5)).norm() < 1e-15);
        assert_eq!(e.max_coord(), Some(1));
        assert_eq!(parse("z^-1").unwrap().eval(&[C64::new(4.0, 0.0)]), C64::new(0.25, 0.0));
    }

    #[test]
    fn functions_and_constants() {
        let v = parse("conj(z) * exp(i*pi) + abs(3+4*i) + sqrt(4)").unwrap().eval(&[C64::new(0.0, 1.0)]);
        assert!((v - C64::new(7.0, 1.0)).norm() < 1e-14);
        assert_eq!(parse("1.5e-1").unwrap().eval(&[]), C64::new(0.15, 0.0));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "z +", "(z", "w", "z^0.5", "z $ 2", "conj z", "1 2"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }
}
