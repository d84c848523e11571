"""The .pn net format, marking literals, witness JSON and DOT export.

Grammar (line oriented, ``#`` starts a comment)::

    net   ::= "net" IDENT NL decl*
    decl  ::= "place" IDENT ["init" NAT] NL
            | "trans" IDENT ":" mset "-[" IDENT "]->" mset NL
    mset  ::= "0" | term ("+" term)*
    term  ::= [NAT "*"] IDENT
    IDENT ::= [A-Za-z_][A-Za-z0-9_']*
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .causal import CausalNet, Process
from .closure import PlaceRelation
from .multiset import Multiset, format_mset
from .net import Marking, NetError, PetriNet, ReachGraph, Transition
from .place_bisim import PlaceBisimReport
from .verdict import Outcome, Verdict


class ParseError(NetError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        super().__init__(f"{line}:{col}: {msg}" if line else msg)


_TOKEN = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<arrow_l>-\[)
  | (?P<arrow_r>\]->)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<nat>[0-9]+)
  | (?P<op>[:+*])
""", re.VERBOSE)


@dataclass
class NetDocument:
    name: str
    places: list                 # [(name, initial count)]
    transitions: list            # [(id, pre, label, post)]
    spans: dict = field(default_factory=dict)  # name -> (line, col)

    def to_net(self) -> PetriNet:
        return PetriNet(tuple(p for p, _ in self.places),
                        tuple(Transition(t, pre, lab, post) for t, pre, lab, post in self.transitions),
                        name=self.name)

    def initial(self) -> Marking:
        return Multiset({p: n for p, n in self.places if n})


def _tokens(text: str, lineno: int):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, toks, line):
        self.toks, self.i, self.line = toks, 0, line

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self._endcol())

    def _endcol(self):
        return (self.toks[-1][2] + len(self.toks[-1][1])) if self.toks else 1

    def take(self, kind, value=None):
        k, v, col = self.peek()
        if k != kind or (value is not None and v != value):
            want = value or kind
            got = v if v is not None else "end of line"
            raise ParseError(f"expected {want}, got {got!r}", self.line, col)
        self.i += 1
        return v, col

    def done(self):
        k, v, col = self.peek()
        if k is not None:
            raise ParseError(f"unexpected {v!r}", self.line, col)


def _mset(cur: _Cursor) -> tuple:
    """Parse a multiset; returns ``(Multiset, [(place, col)])``."""
    k, v, col = cur.peek()
    if k == "nat" and v == "0":
        nk = cur.toks[cur.i + 1][0] if cur.i + 1 < len(cur.toks) else None
        if nk != "op" or cur.toks[cur.i + 1][1] != "*":
            cur.i += 1
            return Multiset(), []
    counts: dict = {}
    refs = []
    while True:
        k, v, col = cur.peek()
        n = 1
        if k == "nat":
            cur.i += 1
            n = int(v)
            cur.take("op", "*")
        name, ncol = cur.take("ident")
        if n == 0:
            raise ParseError("zero coefficient", cur.line, col)
        counts[name] = counts.get(name, 0) + n
        refs.append((name, ncol))
        k, v, _ = cur.peek()
        if k == "op" and v == "+":
            cur.i += 1
            continue
        return Multiset(counts), refs


def _lines(text: str):
    for i, raw in enumerate(text.split("\n"), 1):
        line = raw.split("#", 1)[0].rstrip("\r")
        if line.strip():
            yield i, line


def parse_document(text: str, allow_dup: bool = False) -> NetDocument:
    doc = None
    seen_triples = {}
    for lineno, line in _lines(text):
        cur = _Cursor(_tokens(line, lineno), lineno)
        kw, col = cur.take("ident")
        if doc is None:
            if kw != "net":
                raise ParseError("document must start with 'net NAME'", lineno, col)
            name, _ = cur.take("ident")
            cur.done()
            doc = NetDocument(name, [], [])
            continue
        if kw == "place":
            name, ncol = cur.take("ident")
            n = 0
            if cur.peek()[0] == "ident":
                cur.take("ident", "init")
                n = int(cur.take("nat")[0])
            cur.done()
            if name in doc.spans:
                raise ParseError(f"duplicate name {name}", lineno, ncol)
            doc.spans[name] = (lineno, ncol)
            doc.places.append((name, n))
        elif kw == "trans":
            tid, tcol = cur.take("ident")
            cur.take("op", ":")
            pre, refs1 = _mset(cur)
            cur.take("arrow_l")
            label, _ = cur.take("ident")
            cur.take("arrow_r")
            post, refs2 = _mset(cur)
            cur.done()
            if tid in doc.spans:
                raise ParseError(f"duplicate name {tid}", lineno, tcol)
            if not pre:
                raise ParseError(f"transition {tid}: empty pre-set", lineno, tcol)
            declared = {p for p, _ in doc.places}
            for p, pcol in refs1 + refs2:
                if p not in declared:
                    raise ParseError(f"undeclared place {p}", lineno, pcol)
            triple = (pre, label, post)
            if triple in seen_triples and not allow_dup:
                raise ParseError(f"transition {tid} duplicates the triple of {seen_triples[triple]}"
                                 " (use --allow-dup)", lineno, tcol)
            seen_triples.setdefault(triple, tid)
            doc.spans[tid] = (lineno, tcol)
            doc.transitions.append((tid, pre, label, post))
        else:
            raise ParseError(f"unknown declaration {kw!r}", lineno, col)
    if doc is None:
        raise ParseError("empty document")
    return doc


def parse_net(text: str, allow_dup: bool = False) -> tuple:
    """Returns ``(PetriNet, initial marking)``."""
    doc = parse_document(text, allow_dup)
    return doc.to_net(), doc.initial()


def parse_marking(net: PetriNet, text: str) -> Marking:
    lines = [l for _, l in _lines(text)]
    if len(lines) != 1:
        raise ParseError("expected a single marking literal")
    cur = _Cursor(_tokens(lines[0], 1), 1)
    m, refs = _mset(cur)
    cur.done()
    for p, col in refs:
        if p not in net.places:
            raise ParseError(f"unknown place {p}", 1, col)
    return m


def serialize_net(net: PetriNet, m0: Marking = None) -> str:
    m0 = m0 or Multiset()
    out = [f"net {net.name}"]
    for p in net.places:
        out.append(f"place {p}" + (f" init {m0[p]}" if m0[p] else ""))
    for t in net.transitions:
        out.append(f"trans {t.id}: {format_mset(t.pre)} -[{t.label}]-> {format_mset(t.post)}")
    return "\n".join(out) + "\n"


# -- witness JSON --------------------------------------------------------


def _linking_json(l: Multiset) -> list:
    return [[list(pair), n] for pair, n in l.items()]


def witness_dict(v) -> dict:
    if isinstance(v, PlaceBisimReport):
        d = {"verdict": "YES" if v.ok else "NO"}
        if v.violation is not None:
            x = v.violation
            d["violation"] = {"transition": x.transition, "marking": format_mset(x.marking),
                              "reason": x.reason, "side": x.side}
        return d
    if isinstance(v, Verdict):
        d = {"verdict": str(v.outcome), "stats": _jsonable(v.stats)}
        if v.outcome is Outcome.INCONCLUSIVE:
            if v.reason:
                d["stats"]["reason"] = v.reason
            return d
        if v.relation is not None:
            d["relation"] = [list(p) for p in sorted(v.relation)]
        if v.linkings is not None:
            d["linkings"] = [_linking_json(l) for l in v.linkings]
        if v.trace is not None:
            d["trace"] = [m.as_dict() for m in v.trace]
        return d
    if isinstance(v, PlaceRelation):
        return {"relation": [list(p) for p in sorted(v)]}
    # a bare collection of linkings
    return {"linkings": [_linking_json(l) for l in sorted(v, key=Multiset.sort_key)]}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def emit_witness(v) -> str:
    return json.dumps(witness_dict(v), sort_keys=True, indent=2) + "\n"


def load_relation(text: str) -> PlaceRelation:
    """Relation from JSON: either ``[[p, q], ...]`` or ``{"relation": [...]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"relation JSON: {exc}") from None
    if isinstance(data, dict):
        data = data.get("relation")
    if not isinstance(data, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in data):
        raise ParseError("relation must be a list of [place, place] pairs")
    return PlaceRelation(tuple(p) for p in data)


# -- DOT -----------------------------------------------------------------


def _q(s) -> str:
    return '"' + str(s).replace('"', '\\"') + '"'


def export_dot(obj, m0: Marking = None) -> str:
    if isinstance(obj, PetriNet):
        return _dot_net(obj, m0 or Multiset())
    if isinstance(obj, ReachGraph):
        return _dot_reach(obj)
    if isinstance(obj, Process):
        return _dot_cnet(obj.cnet, obj.place, obj.trans)
    if isinstance(obj, CausalNet):
        return _dot_cnet(obj, None, None)
    raise TypeError(f"cannot export {type(obj).__name__}")


def _dot_net(net: PetriNet, m0: Marking) -> str:
    out = [f"digraph {_q(net.name)} {{"]
    for p in net.places:
        tok = f"\\n{m0[p]}" if m0[p] else ""
        out.append(f"  {_q('p:' + p)} [shape=circle,label={_q(p)[:-1]}{tok}\"];")
    for t in net.transitions:
        out.append(f"  {_q('t:' + t.id)} [shape=box,label={_q(t.id + ' ' + t.label)}];")
    for t in net.transitions:
        for p, n in t.pre.items():
            out.append(f"  {_q('p:' + p)} -> {_q('t:' + t.id)}" + (f" [label=\"{n}\"]" if n > 1 else "") + ";")
        for p, n in t.post.items():
            out.append(f"  {_q('t:' + t.id)} -> {_q('p:' + p)}" + (f" [label=\"{n}\"]" if n > 1 else "") + ";")
    out.append("}")
    return "\n".join(out) + "\n"


def _dot_reach(g: ReachGraph) -> str:
    ids = {m: i for i, m in enumerate(g.nodes)}
    out = ["digraph reach {"]
    for m, i in ids.items():
        shape = "doublecircle" if m == g.root else "ellipse"
        out.append(f"  m{i} [shape={shape},label={_q(format_mset(m))}];")
    for a, t, b in g.edges:
        out.append(f"  m{ids[a]} -> m{ids[b]} [label={_q(t)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _dot_cnet(c: CausalNet, place, trans) -> str:
    out = ["digraph causal {"]
    for b in sorted(c.conditions):
        lab = f"b{b}" + (f"\\n{place[b]}" if place else "")
        out.append(f"  b{b} [shape=circle,label=\"{lab}\"];")
    for e in sorted(c.events):
        lab = f"e{e} {c.labels[e]}" + (f"\\n{trans[e]}" if trans else "")
        out.append(f"  e{e} [shape=box,label=\"{lab}\"];")
    for e in sorted(c.events):
        for b in c.pre[e]:
            out.append(f"  b{b} -> e{e};")
        for b in c.post[e]:
            out.append(f"  e{e} -> b{b};")
    out.append("}")
    return "\n".join(out) + "\n"
