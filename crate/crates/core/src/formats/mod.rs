//! Readers and writers for every on-disk format: the corpus JSON schema,
//! CoNLL-U parses, conlleval-style tag files, lexicon TSVs and word2vec-style
//! text vectors. Byte-level examples live in `docs/formats.md`.

mod conllu;
mod corpus;
mod lexicon;
mod tags;
mod vectors;

pub use conllu::{parse_conllu, read_conllu, read_conllu_with_text};
pub use corpus::{
    corpus_to_string, load_corpus, load_corpus_str, save_corpus, CorpusFile, FORMAT_VERSION,
};
pub use lexicon::{load_code_mapping, load_lexicon, CodeMapping, Lexicon};
pub use tags::{
    layer_tag_path, read_tag_file, tag_file_string, write_tag_file, write_tag_files, ChunkTag,
    TagFile, TagFileSentence,
};
pub use vectors::{load_vectors, parse_vectors, VectorTable};
