//! Maps a path inside a JSON document to the line it starts on.
//!
//! Only used on text that already parsed, so the scanner is lenient.

/// One step of a path: an object key or an array index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seg {
    Key(String),
    Index(usize),
}

impl From<&str> for Seg {
    fn from(k: &str) -> Self {
        Seg::Key(k.to_string())
    }
}

impl From<usize> for Seg {
    fn from(i: usize) -> Self {
        Seg::Index(i)
    }
}

/// Builds a path from keys and indices: `path!["edges", 2, 0]`.
#[macro_export]
macro_rules! path {
    ($($s:expr),* $(,)?) => { vec![$($crate::locate::Seg::from($s)),*] };
}

struct Scanner<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Scanner<'_> {
    fn ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.text.get(self.pos).copied()
    }

    fn string(&mut self) -> String {
        let start = self.pos + 1;
        self.pos += 1;
        while self.pos < self.text.len() && self.text[self.pos] != b'"' {
            if self.text[self.pos] == b'\\' {
                self.pos += 1;
            }
            self.pos += 1;
        }
        let raw = &self.text[start..self.pos.min(self.text.len())];
        self.pos += 1;
        serde_json::from_slice::<String>(&[b"\"", raw, b"\""].concat())
            .unwrap_or_else(|_| String::from_utf8_lossy(raw).into_owned())
    }

    fn skip(&mut self) {
        match self.peek() {
            Some(b'"') => {
                self.string();
            }
            Some(b'{') | Some(b'[') => {
                let mut depth = 0usize;
                while self.pos < self.text.len() {
                    match self.text[self.pos] {
                        b'"' => {
                            self.string();
                            continue;
                        }
                        b'{' | b'[' => depth += 1,
                        b'}' | b']' => {
                            depth -= 1;
                            if depth == 0 {
                                self.pos += 1;
                                return;
                            }
                        }
                        _ => {}
                    }
                    self.pos += 1;
                }
            }
            Some(_) => {
                while self.pos < self.text.len() && !b",}] \t\r\n".contains(&self.text[self.pos]) {
                    self.pos += 1;
                }
            }
            None => {}
        }
    }

    /// Positions the scanner at the start of the value at `path`.
    fn descend(&mut self, path: &[Seg]) -> bool {
        let Some((first, rest)) = path.split_first() else {
            self.ws();
            return true;
        };
        match (first, self.peek()) {
            (Seg::Key(k), Some(b'{')) => {
                self.pos += 1;
                loop {
                    match self.peek() {
                        Some(b'"') => {
                            let key = self.string();
                            if self.peek() != Some(b':') {
                                return false;
                            }
                            self.pos += 1;
                            if &key == k {
                                return self.descend(rest);
                            }
                            self.skip();
                            if self.peek() == Some(b',') {
                                self.pos += 1;
                            }
                        }
                        _ => return false,
                    }
                }
            }
            (Seg::Index(i), Some(b'[')) => {
                self.pos += 1;
                for _ in 0..*i {
                    if self.peek() == Some(b']') {
                        return false;
                    }
                    self.skip();
                    if self.peek() != Some(b',') {
                        return false;
                    }
                    self.pos += 1;
                }
                if self.peek() == Some(b']') {
                    return false;
                }
                self.descend(rest)
            }
            _ => false,
        }
    }
}

/// 1-based line of the value at `path`, if it exists.
pub fn line_of(text: &str, path: &[Seg]) -> Option<usize> {
    let mut s = Scanner {
        text: text.as_bytes(),
        pos: 0,
    };
    s.descend(path)
        .then(|| text.as_bytes()[..s.pos].iter().filter(|&&b| b == b'\n').count() + 1)
}
