/// Removes Greek tonos and dialytika (precomposed or combining). Other
/// characters pass through unchanged.
pub fn strip_accents(word: &str) -> String {
    word.chars().filter_map(base_char).collect()
}

fn base_char(ch: char) -> Option<char> {
    let mapped = match ch {
        // combining acute, diaeresis, dialytika tonos, greek tonos
        '\u{0301}' | '\u{0308}' | '\u{0344}' | '\u{0384}' => return None,
        'ά' => 'α',
        'έ' => 'ε',
        'ή' => 'η',
        'ί' | 'ϊ' | 'ΐ' => 'ι',
        'ό' => 'ο',
        'ύ' | 'ϋ' | 'ΰ' => 'υ',
        'ώ' => 'ω',
        'Ά' => 'Α',
        'Έ' => 'Ε',
        'Ή' => 'Η',
        'Ί' | 'Ϊ' => 'Ι',
        'Ό' => 'Ο',
        'Ύ' | 'Ϋ' => 'Υ',
        'Ώ' => 'Ω',
        other => other,
    };
    Some(mapped)
}
