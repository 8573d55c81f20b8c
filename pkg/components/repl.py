"""
REPL Component
Interactive query sessions over the world views of a loaded program
"""

import logging
import sys
from typing import List, Optional, TextIO

from components.epistemic import ReductMode, Semantics, WorldView, compute_world_views
from components.queries import WorldViewSession, parse_queries
from components.ras_engine import QueryMode
from components.syntax import GroundProgram, load_program
from utils.errors import ElpError
from utils.helpers import MODE_CHOICES, format_bool

logger = logging.getLogger(__name__)

PROMPT = "elp> "

HELP_TEXT = """\
?- q1, q2.            ask queries (K, M, NOT, ENOT, not, KW, MWsome, MWall, ENOTW, NOTW)
:mode contextual|independent
:worldviews           list the world views
:load FILE            load another program
:reset                forget the query context
:help                 this text
:quit                 leave"""


class ReplSession:
    """
    One interactive session; world views are computed once per loaded program

    Args:
        gp: Normalized ground program
        mode: Query sequence mode
        reduct: Epistemic reduct mode used for world views
        semantics: AS or RAS
        method: "scenario" or "oracle"
    """

    def __init__(
        self,
        gp: GroundProgram,
        mode: QueryMode = QueryMode.CONTEXTUAL,
        reduct: ReductMode = ReductMode.SHEN_EITER,
        semantics: Semantics = Semantics.AS,
        method: str = "scenario",
    ):
        self.gp = gp
        self.reduct = reduct
        self.semantics = semantics
        self.method = method
        self._mode = QueryMode(mode)
        self._world_views: Optional[List[WorldView]] = None
        self._session: Optional[WorldViewSession] = None

    @property
    def world_views(self) -> List[WorldView]:
        if self._world_views is None:
            self._world_views = compute_world_views(self.gp, self.method, self.reduct, self.semantics)
            logger.debug("cached %d world views", len(self._world_views))
        return self._world_views

    @property
    def session(self) -> WorldViewSession:
        if self._session is None:
            self._session = WorldViewSession(self.world_views, self._mode)
        return self._session

    def load(self, path: str) -> None:
        self.gp = load_program(path)
        self._world_views = None
        self._session = None

    def handle(self, line: str) -> Optional[str]:
        """
        Execute one input line

        Returns:
            Text to print, or None when the session should end
        """
        line = line.strip()
        if not line or line.startswith("%"):
            return ""
        if line.startswith(":"):
            return self._command(line[1:].split())

        queries = parse_queries(line)
        results = self.session.ask_all(queries)
        if len(queries) == 1:
            return format_bool(results[0].value)
        return "\n".join(f"{q}: {format_bool(r.value)}" for q, r in zip(queries, results))

    def _command(self, words: List[str]) -> Optional[str]:
        name, rest = (words[0], words[1:]) if words else ("help", [])
        if name in ("quit", "q", "exit"):
            return None
        if name == "help":
            return HELP_TEXT
        if name == "mode":
            if len(rest) != 1 or rest[0] not in MODE_CHOICES:
                return f"usage: :mode {'|'.join(MODE_CHOICES)}"
            self._mode = QueryMode(rest[0])
            self.session.set_mode(self._mode)
            return f"mode: {self._mode.value}"
        if name == "worldviews":
            return "\n".join(str(wv) for wv in self.world_views) or "no world views"
        if name == "load":
            if len(rest) != 1:
                return "usage: :load FILE"
            self.load(rest[0])
            return f"loaded {rest[0]}"
        if name == "reset":
            self.session.reset()
            return "context cleared"
        return f"unknown command :{name} (try :help)"


def run_repl(
    gp: GroundProgram,
    mode: QueryMode = QueryMode.CONTEXTUAL,
    reduct: ReductMode = ReductMode.SHEN_EITER,
    semantics: Semantics = Semantics.AS,
    method: str = "scenario",
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
) -> int:
    """
    Read-eval-print loop until `:quit` or end of input

    Returns:
        Exit status (0)
    """
    inp = stdin or sys.stdin
    out = stdout or sys.stdout
    repl = ReplSession(gp, mode, reduct, semantics, method)
    interactive = inp.isatty() if hasattr(inp, "isatty") else False

    while True:
        if interactive:
            out.write(PROMPT)
            out.flush()
        line = inp.readline()
        if not line:
            break
        try:
            reply = repl.handle(line)
        except ElpError as exc:
            reply = f"error: {exc}"
        if reply is None:
            break
        if reply:
            out.write(reply + "\n")
    return 0
