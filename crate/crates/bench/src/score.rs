//! Lenient answer scoring: a correct answer may be followed by any amount
//! of explanatory text.

use chemagent_core::toolbox::format_2dp;

use crate::questions::AnswerKind;

/// Whether `answer` is a correct reply for `gold`.
///
/// * No answer is never correct.
/// * Qualitative: the gold word (case-insensitive, whole word) must appear,
///   and its complement (Yes/No, High/Low, True/False) must not appear
///   before it.
/// * Quantitative: the first number in the answer, rounded to two
///   decimals, must equal the gold value. A number counts only when it
///   starts a token, so ring-closure digits inside an echoed SMILES
///   (`c1ccccc1`) are skipped. Exponent notation is not recognised.
pub fn score_answer(answer: Option<&str>, gold: &str, kind: AnswerKind) -> bool {
    let Some(answer) = answer else {
        return false;
    };
    match kind {
        AnswerKind::Qualitative => score_qualitative(answer, gold),
        AnswerKind::Quantitative => score_quantitative(answer, gold),
    }
}

/// The opposite answer word, if `word` is one of the categorical answers.
pub fn complement(word: &str) -> Option<&'static str> {
    const PAIRS: [(&str, &str); 3] = [("yes", "no"), ("high", "low"), ("true", "false")];
    let w = word.to_ascii_lowercase();
    PAIRS.iter().find_map(|&(a, b)| {
        if w == a {
            Some(b)
        } else if w == b {
            Some(a)
        } else {
            None
        }
    })
}

fn score_qualitative(answer: &str, gold: &str) -> bool {
    let gold = gold.trim().to_lowercase();
    if gold.is_empty() {
        return false;
    }
    let opposite = complement(&gold);
    for word in words(answer) {
        let word = word.to_lowercase();
        if word == gold {
            return true;
        }
        if Some(word.as_str()) == opposite {
            return false;
        }
    }
    false
}

/// Maximal runs of alphanumeric characters.
fn words(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty())
}

fn score_quantitative(answer: &str, gold: &str) -> bool {
    let Ok(gold) = gold.trim().parse::<f64>() else {
        return false;
    };
    match first_number(answer) {
        Some(x) => format_2dp(x) == format_2dp(gold),
        None => false,
    }
}

/// The first decimal number that begins a token: optional sign (`-`, `+`
/// or U+2212), digits, optional fraction (`12`, `-0.5`, `.25`, `3.`).
pub fn first_number(text: &str) -> Option<f64> {
    let chars: Vec<char> = text.chars().collect();
    (0..chars.len()).find_map(|i| {
        let starts_token =
            i == 0 || !(chars[i - 1].is_alphanumeric() || matches!(chars[i - 1], '.' | '_' | '-' | '+' | '\u{2212}'));
        if starts_token {
            number_at(&chars[i..])
        } else {
            None
        }
    })
}

fn number_at(c: &[char]) -> Option<f64> {
    let (negative, body) = match c.first() {
        Some('-' | '\u{2212}') => (true, &c[1..]),
        Some('+') => (false, &c[1..]),
        _ => (false, c),
    };
    let int_digits = body.iter().take_while(|ch| ch.is_ascii_digit()).count();
    let mut len = int_digits;
    if body.get(len) == Some(&'.') {
        let frac_digits = body[len + 1..].iter().take_while(|ch| ch.is_ascii_digit()).count();
        if int_digits == 0 && frac_digits == 0 {
            return None;
        }
        len += 1 + frac_digits;
    } else if int_digits == 0 {
        return None;
    }
    let mut digits: String = body[..len].iter().collect();
    if digits.starts_with('.') {
        digits.insert(0, '0');
    }
    let value: f64 = digits.trim_end_matches('.').parse().ok()?;
    Some(if negative { -value } else { value })
}
