"""Privacy-preserving duplicate detection over irreversibly encoded text."""

from ._core import (
    Alphabet,
    CompressionReport,
    CorpusDb,
    DetectorOptions,
    DocRegistryEntry,
    DocumentInput,
    EncodingError,
    FastaRecord,
    FmIndex,
    FpReport,
    GapSpan,
    LabeledDoc,
    LoadError,
    MatchMeta,
    MatchRecord,
    OffsetMap,
    PbsDocument,
    PbsError,
    PlagiarismReport,
    RefModel,
    ReportMeta,
    SearchService,
    StripResult,
    Token,
    UsageError,
    ValidationError,
    ZipEntry,
    chinese_corpus,
    codepoint_sum,
    compression_ratio,
    encode_document,
    encode_word,
    english_corpus,
    fp_rate,
    labeled_ref_corpus,
    meta_from_json,
    meta_list_from_json,
    meta_list_to_json,
    meta_to_json,
    pairwise,
    parse_fasta,
    parse_offset_map,
    read_zip,
    render_html_report,
    roc_auc,
    search_document,
    search_pbs,
    sha256_hex,
    sweep,
    sweep_tsv,
    to_meta,
    tokenize,
    write_fasta,
    write_offset_map,
    write_zip,
)

__version__ = "0.1.0"
