"""Version-compatibility knowledge graphs for deep-learning stacks.

The package mines a Q&A post corpus for statements about component
version (in)compatibility, consolidates them into a confidence-scored
knowledge graph, and answers queries and environment checks against it,
both as a library and over HTTP.
"""

from .checker import (
    EnvironmentSpec,
    Issue,
    Metrics,
    check_environment,
    evaluate_metrics,
    f1_score,
    parse_environment,
)
from .corpus import (
    FilterConfig,
    Post,
    candidate_paragraphs,
    filter_posts,
    load_corpus,
    load_filter_config,
)
from .errors import (
    CompatKGError,
    DataError,
    DictionaryError,
    GraphFormatError,
    StorageError,
    UnrecognizedQueryError,
)
from .graph import (
    Evidence,
    KnowledgeGraph,
    Relation,
    aggregate,
    build_graph,
    canonical_pair,
    confidence_score,
    load_graph,
    save_graph,
)
from .inference import (
    COMPATIBLE,
    INCOMPATIBLE,
    UNKNOWN,
    CompatibilityQuestion,
    HeuristicOracle,
    RemoteOracle,
    Verdict,
    build_question,
    heuristic_infer,
    infer_paragraph,
    remote_infer,
)
from .pipeline import OracleConfig, PipelineConfig, RunReport, run_pipeline
from .query import (
    LayerStats,
    Query,
    QueryResult,
    Subgraph,
    parse_query,
    query_payload,
    resolve,
    top_components,
)
from .recognizer import (
    LAYERS,
    Binding,
    ComponentEntry,
    Mention,
    VersionedComponent,
    analyze_paragraph,
    bind_versions,
    load_dictionary,
    recognize_components,
    recognize_versions,
)
from .service import ComponentStats, ServiceConfig, create_app, serve
from .versions import Version, normalize_version, shared_prefix_len, versions_match

__version__ = "0.1.0"
