"""Variable-word combinatorics over increasing alphabet ladders.

Word algebra, span enumeration and recognition, a finite Hales-Jewett
solver, bounded-depth largeness probing, and certificate extraction with
independent verification.
"""

from .certificates import (CarlsonCertificate, Certificate, CSCertificate,
                           HJCertificate, carlson_product_count,
                           cs_product_count, load_certificate,
                           save_certificate, verify_carlson_certificate,
                           verify_certificate, verify_cs_certificate,
                           verify_hj_certificate)
from .coloring import (BuiltinSpec, ColoringOracle, DfaSpec, ProductSpec,
                       TableSpec, builtin, decode_product, dfa_coloring,
                       load_coloring, product_coloring, save_coloring,
                       table_coloring)
from .errors import (BudgetExhausted, CapExceeded, IncompleteTable,
                     Inconclusive, InsufficientPrefix, ParseError,
                     UnknownName, VarwordError, WitnessInconsistent)
from .extraction import (MODE_DIRECT, MODE_PROOF_GUIDED, PipelineStep,
                         carlson_extract, carlson_step, cs_extract, cs_step)
from .hj import (HJWitness, find_monochromatic_line, hj_holds, hj_number,
                 hj_profile, line_candidates, verify_hj_witness)
from .largeness import (DEFAULT_BUDGET, Budget, Cuts, ExtensionCheck,
                        FusionStep, LargenessEvidence, Meter, ProbeMode,
                        RefineResult, SetOracle, Verdict, color_class,
                        color_refine, ef_quotient, empty_set, full_set,
                        fusion_reindex, intersect_sets, largeness_probe,
                        one_mono_word, replay_evidence)
from .spans import (BlockWitness, SpanKind, SpanQuery, SpanSelection,
                    enumerate_span, is_extracted_block_subseq,
                    is_reduced_block_subseq, span_contains, span_size)
from .words import (EMPTY, TAIL_ARITHMETIC, TAIL_CONSTANT, X, AlphabetLadder,
                    VariableWord, VarSeq, Word, concat, concat_all,
                    double_star, make_word, parse_word, render_word, shift,
                    split_star, star, substitute, x_word)

__version__ = "0.1.0"
