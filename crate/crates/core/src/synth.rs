//! Bundled fixtures and seeded synthetic corpora with known noise.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{CodeCommentPair, Dataset, Language, Partition};
use crate::taxonomy::NoiseCategory;

/// Category sets keyed by pair id.
pub type GoldLabels = BTreeMap<String, BTreeSet<NoiseCategory>>;

/// One example per category, each carrying its raw comment.
pub fn gold_corpus() -> (Dataset, GoldLabels) {
    use NoiseCategory::*;

    let lookup = "public double lookup(int series, int item) {\n    return values[series][item];\n}";
    let rows: Vec<(NoiseCategory, CodeCommentPair)> = vec![
        (
            PartialSentence,
            CodeCommentPair::new("gold-partial", lookup, "returns the high value")
                .with_raw("/* Returns the high-value\n * for an item within a series. */"),
        ),
        (
            VerboseSentence,
            CodeCommentPair::new(
                "gold-verbose",
                "def generate_summary_csv(data):\n    rows = collect_usage(data)\n    write_rows(rows)",
                "generate a csv file containing a summary of the xblock usage arguments course data",
            )
            .with_raw("\"\"\"\nGenerate a CSV file containing a summary of the xBlock usage\nArguments:course_data\n\"\"\"")
            .with_language(Language::Python),
        ),
        (
            ContentTampering,
            CodeCommentPair::new(
                "gold-tampering",
                "public AuthConfigProvider build() {\n    return provider.create(config);\n}",
                "p builds the jaspic application context p",
            )
            .with_raw("/* <p> Builds the JASPIC application context.</p> */"),
        ),
        (
            OverSplitting,
            CodeCommentPair::new(
                "gold-splitting",
                "private void initialize() {\n    jTextField = new JTextField();\n    jTextField.setBounds(10, 10, 200, 20);\n}",
                "this method initializes j text field",
            )
            .with_raw("/* This method initializes jTextField. */"),
        ),
        (
            NonLiteral,
            CodeCommentPair::new(
                "gold-nonliteral",
                "public static List toList(JSONArray array, Class clazz) {\n    List result = new ArrayList();\n    fill(result, array, clazz);\n    return result;\n}",
                "jsonarray bean list arraylist",
            )
            .with_raw("/* 将JSONArray转换为Bean的List，默认为ArrayList */"),
        ),
        (
            Interrogation,
            CodeCommentPair::new(
                "gold-interrogation",
                "public boolean isDue() {\n    if (isUpToDate)\n        return false;\n    long now = System.currentTimeMillis();\n    return now >= nextPrompt;\n}",
                "do we need to show the upgrade wizard prompt ?",
            )
            .with_raw("/* Do we need to show the upgrade wizard prompt? */"),
        ),
        (
            UnderDevelopment,
            CodeCommentPair::new(
                "gold-underdev",
                "protected void openFile(File f) {\n    if (f == null) {\n        return;\n    }\n    load(f);\n}",
                "description of the method",
            )
            .with_raw("/* Description of the Method */"),
        ),
        (
            EmptyFunction,
            CodeCommentPair::new(
                "gold-empty",
                "protected void end(){}",
                "specifies the behaviour of the automaton in its end state",
            )
            .with_raw("/*Specifies the behaviour of the automaton in its end state*/"),
        ),
        (
            CommentedOutMethod,
            CodeCommentPair::new(
                "gold-commented",
                "public URI resolve(String id) {\n    return base.resolve(id);\n}",
                "for now try mappig full type uri public string transform type id uri typeuri return typeuri to string",
            )
            .with_raw("/* for now try mappig full type URI  */\n// public String transformTypeID(URI typeuri){\n// return typeuri.toString();}"),
        ),
        (
            BlockCommentCode,
            CodeCommentPair::new(
                "gold-blockcomment",
                "public int getFixQuality(){\n  checkRefresh();\n  // TODO: Why is he using Math.round?\n  return Math.round(quality);}",
                "get gps quality data",
            )
            .with_raw("/* Get GPS Quality Data  */"),
        ),
        (
            AutoCode,
            CodeCommentPair::new(
                "gold-autocode",
                "public void testConstructor() {\n    TestResult str = new TestResult();\n    TestID testID1 = new TestID(str);\n}",
                "test the constructor",
            )
            .with_raw("/* Test the constructor */"),
        ),
        (
            DuplicatedCode,
            CodeCommentPair::new("gold-duplicate", lookup, "returns the value stored for an item")
                .with_raw("/** Returns the value stored for an item. */")
                .with_partition(Partition::Test),
        ),
    ];
    let labels = rows
        .iter()
        .map(|(c, p)| (p.id.clone(), BTreeSet::from([*c])))
        .collect();
    let pairs = rows.into_iter().map(|(_, p)| p).collect();
    (Dataset::new("gold", pairs).expect("gold corpus is valid"), labels)
}

const VERBS: [(&str, &str); 12] = [
    ("computes", "compute"),
    ("loads", "load"),
    ("stores", "store"),
    ("renders", "render"),
    ("parses", "parse"),
    ("validates", "validate"),
    ("merges", "merge"),
    ("sorts", "sort"),
    ("encodes", "encode"),
    ("builds", "build"),
    ("resolves", "resolve"),
    ("formats", "format"),
];
const OBJECTS: [(&str, &str); 10] = [
    ("the user record", "Record"),
    ("the cached page", "Page"),
    ("the config file", "Config"),
    ("the order total", "Total"),
    ("the session state", "Session"),
    ("the index table", "Index"),
    ("the audit log", "Audit"),
    ("the pending jobs", "Jobs"),
    ("the network buffer", "Buffer"),
    ("the font metrics", "Metrics"),
];
const TAILS: [&str; 5] = ["", " for the current request", " in a single pass", " before saving", " when the cache is cold"];
const SPLIT_IDENTS: [&str; 6] = ["rowCount", "pageCache", "userTable", "fontSize", "jobQueue", "auditTrail"];

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map_or_else(String::new, |f| f.to_uppercase().chain(c).collect())
}

fn snake(camel: &str) -> String {
    crate::lexing::split_identifier(camel).join("_")
}

/// A clean pair's ingredients; plants rewrite some of them.
struct Draft {
    id: String,
    language: Language,
    verb: (&'static str, &'static str),
    object: (&'static str, &'static str),
    tail: &'static str,
    index: usize,
    template: usize,
}

impl Draft {
    fn random(rng: &mut ChaCha8Rng, id: String, index: usize, language: Language) -> Self {
        Draft {
            id,
            language,
            verb: *VERBS.choose(rng).unwrap(),
            object: *OBJECTS.choose(rng).unwrap(),
            tail: TAILS.choose(rng).unwrap(),
            index,
            template: rng.gen_range(0..3),
        }
    }

    fn summary(&self) -> String {
        format!("{} {}{}", self.verb.0, self.object.0, self.tail)
    }

    fn name(&self) -> String {
        format!("{}{}{}", self.verb.1, self.object.1, self.index)
    }

    fn raw(&self, text: &str) -> String {
        match self.language {
            Language::Java => format!("/**\n * {text}\n */"),
            Language::Python => format!("\"\"\"{text}\n\"\"\""),
        }
    }

    fn code_with(&self, extra_line: Option<&str>) -> String {
        let i = self.index;
        let extra = extra_line.map(|l| format!("    {l}\n")).unwrap_or_default();
        match self.language {
            Language::Java => {
                let name = self.name();
                match self.template {
                    0 => format!(
                        "public int {name}(int value) {{\n    int total = value * {};\n{extra}    log(total);\n    return total + {i};\n}}",
                        i % 7 + 2
                    ),
                    1 => format!(
                        "public String {name}(String input) {{\n    String trimmed = input.trim();\n{extra}    if (trimmed.isEmpty()) {{\n        return null;\n    }}\n    return trimmed + \"{i}\";\n}}"
                    ),
                    _ => format!(
                        "void {name}(List items) {{\n    for (Object item : items) {{\n        handle(item, {i});\n    }}\n{extra}    flush();\n}}"
                    ),
                }
            }
            Language::Python => {
                let name = snake(&self.name());
                format!("def {name}(value):\n    total = value * {}\n{extra}    log(total)\n    return total + {i}", i % 7 + 2)
            }
        }
    }

    fn clean(&self) -> CodeCommentPair {
        let summary = self.summary();
        self.pair(self.code_with(None), summary.clone(), self.raw(&format!("{}.", capitalize(&summary))))
    }

    fn pair(&self, code: String, comment: String, raw: String) -> CodeCommentPair {
        CodeCommentPair::new(self.id.clone(), code, comment)
            .with_raw(raw)
            .with_language(self.language)
    }

    /// The pair with `category` planted. `DuplicatedCode` is handled by the
    /// caller, which needs a second pair.
    fn planted(&self, category: NoiseCategory) -> CodeCommentPair {
        use NoiseCategory::*;

        let summary = self.summary();
        let sentence = capitalize(&summary);
        let java = self.language == Language::Java;
        let i = self.index;
        match category {
            PartialSentence => {
                let raw = match self.language {
                    Language::Java => format!("/**\n * {sentence}\n * using the shared pool.\n */"),
                    Language::Python => format!("\"\"\"{sentence}\nusing the shared pool.\n\"\"\""),
                };
                self.pair(self.code_with(None), summary, raw)
            }
            VerboseSentence => {
                let raw = match self.language {
                    Language::Java => format!("/**\n * {sentence}\n * Args: value the input\n */"),
                    Language::Python => format!("\"\"\"{sentence}\nArgs: value the input\n\"\"\""),
                };
                self.pair(self.code_with(None), format!("{summary} args value the input"), raw)
            }
            ContentTampering => self.pair(
                self.code_with(None),
                format!("p {summary} p"),
                self.raw(&format!("<p> {sentence}.</p>")),
            ),
            OverSplitting => {
                let ident = SPLIT_IDENTS[i % SPLIT_IDENTS.len()];
                let split = crate::lexing::split_identifier(ident).join(" ");
                let code = if java {
                    format!("public void {}() {{\n    {ident} = create({i});\n    {ident}.reset();\n}}", self.name())
                } else {
                    let ident = snake(ident);
                    format!("def {}(self):\n    self.{ident} = create({i})\n    self.{ident}.reset()", snake(&self.name()))
                };
                let shown = if java { ident.to_string() } else { snake(ident) };
                let raw = self.raw(&format!("{} {shown}.", capitalize(self.verb.0)));
                self.pair(code, format!("{} {split}", self.verb.0), raw)
            }
            NonLiteral => self.pair(
                self.code_with(None),
                format!("{} list", self.object.1.to_lowercase()),
                self.raw(&format!("将{}转换为列表", self.object.1)),
            ),
            Interrogation => {
                let question = format!("do we need to {} {}", self.verb.1, self.object.0);
                self.pair(self.code_with(None), format!("{question} ?"), self.raw(&format!("{}?", capitalize(&question))))
            }
            UnderDevelopment => self.pair(
                self.code_with(None),
                format!("todo {summary}"),
                self.raw(&format!("TODO {summary}.")),
            ),
            EmptyFunction => {
                let code = if java {
                    format!("public void {}(int value) {{\n}}", self.name())
                } else {
                    format!("def {}(value):\n    pass", snake(&self.name()))
                };
                self.pair(code, summary, self.raw(&format!("{sentence}.")))
            }
            CommentedOutMethod => {
                let old = if java {
                    format!("// public void legacy{i}(int value) {{\n//     apply(value);\n// }}")
                } else {
                    format!("# def legacy_{i}(value):\n#     apply(value)")
                };
                let mut pair = self.clean();
                pair.raw_comment = Some(format!("{}\n{old}", self.raw(&format!("{sentence}."))));
                pair
            }
            BlockCommentCode => {
                let note = if java { "// keep the old rounding for now" } else { "# keep the old rounding for now" };
                let mut pair = self.clean();
                pair.code = self.code_with(Some(note));
                pair
            }
            AutoCode => {
                let field = self.object.1.to_lowercase();
                let code = if java {
                    format!("public int get{}{i}() {{\n    return {field}{i};\n}}", self.object.1)
                } else {
                    format!("def get_{field}_{i}(self):\n    return self.{field}_{i}")
                };
                self.pair(code, summary, self.raw(&format!("{sentence}.")))
            }
            DuplicatedCode => self.clean(),
        }
    }
}

/// A synthetic dataset together with the categories planted in it.
#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub dataset: Dataset,
    pub labels: GoldLabels,
}

impl PlantedCorpus {
    pub fn planted_count(&self, category: NoiseCategory) -> usize {
        self.labels.values().filter(|s| s.contains(&category)).count()
    }
}

/// `size` Java pairs, `round(rate * size)` of them carrying each category
/// (disjointly); the rest are clean. Needs `12 * rate <= 1`.
pub fn planted_corpus(size: usize, rate: f64, seed: u64) -> PlantedCorpus {
    let per_category = (rate * size as f64).round() as usize;
    assert!(per_category * 12 <= size, "planted rates exceed the corpus size");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<usize> = (0..size).collect();
    slots.shuffle(&mut rng);
    let mut category_of = vec![None; size];
    for (k, &slot) in slots[..per_category * 12].iter().enumerate() {
        category_of[slot] = Some(NoiseCategory::ALL[k / per_category.max(1)]);
    }
    let drafts: Vec<Draft> = (0..size)
        .map(|i| Draft::random(&mut rng, format!("p{i:06}"), i, Language::Java))
        .collect();
    let clean_train: Vec<usize> = (0..size).filter(|&i| category_of[i].is_none()).collect();

    let mut labels = GoldLabels::new();
    let mut pairs = Vec::with_capacity(size);
    for (i, draft) in drafts.iter().enumerate() {
        let mut set = BTreeSet::new();
        let pair = match category_of[i] {
            None => draft.clean(),
            Some(NoiseCategory::DuplicatedCode) => {
                let source = &drafts[*clean_train.choose(&mut rng).expect("clean pairs exist")];
                set.insert(NoiseCategory::DuplicatedCode);
                let mut pair = draft.clean();
                pair.code = source.clean().code;
                pair.with_partition(Partition::Test)
            }
            Some(category) => {
                set.insert(category);
                draft.planted(category)
            }
        };
        labels.insert(pair.id.clone(), set);
        pairs.push(pair);
    }
    PlantedCorpus {
        dataset: Dataset::new(format!("planted-{seed}"), pairs).expect("synthetic ids are unique"),
        labels,
    }
}

/// A messier corpus for invariant checks: mixed languages and partitions,
/// raw comments sometimes missing, random plants and copied code.
pub fn fuzz_corpus(size: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<CodeCommentPair> = Vec::with_capacity(size);
    for i in 0..size {
        let language = if rng.gen_bool(0.8) { Language::Java } else { Language::Python };
        let draft = Draft::random(&mut rng, format!("f{seed}-{i}"), i, language);
        let mut pair = if rng.gen_bool(0.5) {
            draft.clean()
        } else {
            draft.planted(*NoiseCategory::ALL[..11].choose(&mut rng).unwrap())
        };
        if !pairs.is_empty() && rng.gen_bool(0.08) {
            let source = &pairs[rng.gen_range(0..pairs.len())];
            if source.language == language {
                pair.code = source.code.clone();
            }
        }
        if rng.gen_bool(0.3) {
            pair.raw_comment = None;
        }
        let partition = *Partition::ALL.choose(&mut rng).unwrap();
        pairs.push(pair.with_partition(partition));
    }
    Dataset::new(format!("fuzz-{seed}"), pairs).expect("synthetic ids are unique")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_counts_and_determinism() {
        let a = planted_corpus(240, 0.05, 7);
        assert_eq!(a.dataset.len(), 240);
        for c in NoiseCategory::ALL {
            assert_eq!(a.planted_count(c), 12);
        }
        let b = planted_corpus(240, 0.05, 7);
        assert_eq!(a.dataset, b.dataset);
        assert_ne!(a.dataset, planted_corpus(240, 0.05, 8).dataset);
    }

    #[test]
    fn fuzz_is_seeded() {
        assert_eq!(fuzz_corpus(50, 3), fuzz_corpus(50, 3));
    }
}
