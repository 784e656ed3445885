"""Typed feature structures with reentrancy, unification and subsumption.

A feature structure is a rooted, finite, acyclic graph.  Every node carries
a sort drawn from a finite sort hierarchy and is one of three kinds:

  - an atom (a bare symbol value, no outgoing features),
  - a complex node (a map from feature names to daughter structures), or
  - a set node (a finite collection of structures; set nodes appear only
    as values of the declared set-valued features).

Reentrancy is plain object identity: the same node object reached along
two paths *is* one node, and unification keeps it that way.  Structures
are immutable after construction, so they can be shared freely between
concurrent callers; every operation here returns fresh structures.

Unification returns ``None`` on failure (an atom clash or a sort pair with
no meet); a result that would be cyclic raises :class:`StructuralError`
instead, since acyclicity is a well-formedness condition, not a constraint
conflict.  Set-valued features unify by union: members that impose exactly
the same constraints in the merged graph collapse to one.

The textual rendering (``render``) is the stable debug form used by the
CLI trace output: nested ``[sort FEAT: value ...]`` with ``#n`` tags
marking shared nodes, e.g.::

    [sign PHON: smoker SEM_IND: [top REST: {[pred INST: #1=[top]
        RELN: smoker]} VAR: #1]]
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import StructuralError

TOP = "top"

#: Feature names whose values may be set nodes.
SET_VALUED_FEATURES = frozenset({"REST", "COLLS", "ADJ_DTRS", "COMP_DTRS"})


class SortHierarchy:
    """A finite sort partial order with greatest element ``top``.

    Sorts are declared as (name, parents) edges; ``top`` is implicit.
    Names that were never declared are treated as immediate children of
    ``top``, which keeps ad-hoc atom sorts out of the preamble.  The
    hierarchy must be a meet-semilattice on compatible pairs; pairs whose
    greatest lower bound would be ambiguous are reported by
    :meth:`check_meets` and unify as failure.
    """

    def __init__(self, edges: Optional[Mapping[str, Iterable[str]]] = None):
        self._parents: dict[str, tuple[str, ...]] = {}
        self._ancestors: dict[str, frozenset[str]] = {}
        if edges:
            for name, parents in edges.items():
                self.declare(name, tuple(parents))

    def declare(self, name: str, parents: Iterable[str] = (TOP,)) -> None:
        parents = tuple(parents) or (TOP,)
        if name == TOP:
            raise StructuralError("the sort 'top' cannot be redeclared")
        if name in self._parents and self._parents[name] != parents:
            raise StructuralError(f"conflicting declarations for sort {name!r}")
        self._parents[name] = parents
        self._ancestors.clear()

    @property
    def declared(self) -> tuple[str, ...]:
        return tuple(self._parents)

    def parents(self, name: str) -> tuple[str, ...]:
        return self._parents.get(name, (TOP,))

    def ancestors(self, name: str) -> frozenset[str]:
        """All sorts above ``name``, inclusive; always contains ``top``."""
        cached = self._ancestors.get(name)
        if cached is not None:
            return cached
        if name == TOP:
            result = frozenset({TOP})
        elif name not in self._parents:
            result = frozenset({name, TOP})
        else:
            seen = {name}
            stack = list(self._parents[name])
            while stack:
                cur = stack.pop()
                if cur in seen:
                    continue
                seen.add(cur)
                stack.extend(self._parents.get(cur, (TOP,) if cur != TOP else ()))
            seen.add(TOP)
            result = frozenset(seen)
        self._ancestors[name] = result
        return result

    def is_sub(self, a: str, b: str) -> bool:
        """True iff ``a`` is at or below ``b``."""
        return b in self.ancestors(a)

    def meet(self, a: str, b: str) -> Optional[str]:
        """Greatest lower bound of two sorts, or None if they are incompatible."""
        if a == b:
            return a
        if self.is_sub(a, b):
            return a
        if self.is_sub(b, a):
            return b
        lower = [s for s in self._parents if self.is_sub(s, a) and self.is_sub(s, b)]
        maxima = [
            s
            for s in lower
            if not any(o != s and self.is_sub(s, o) for o in lower)
        ]
        if len(maxima) == 1:
            return maxima[0]
        return None

    def check_meets(self) -> list[tuple[str, str]]:
        """Pairs of declared sorts with more than one maximal lower bound."""
        bad = []
        names = list(self._parents)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                if self.is_sub(a, b) or self.is_sub(b, a):
                    continue
                lower = [
                    s for s in names if self.is_sub(s, a) and self.is_sub(s, b)
                ]
                maxima = [
                    s
                    for s in lower
                    if not any(o != s and self.is_sub(s, o) for o in lower)
                ]
                if len(maxima) > 1:
                    bad.append((a, b))
        return bad


#: Hierarchy with no declared edges: every named sort sits under ``top``.
TRIVIAL_SORTS = SortHierarchy()


class FeatureStructure:
    """Abstract node; see the module docstring for the three kinds."""

    __slots__ = ("sort",)

    def __init__(self, sort: str = TOP):
        if not isinstance(sort, str) or not sort:
            raise StructuralError(f"bad sort label: {sort!r}")
        object.__setattr__(self, "sort", sort)

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("feature structures are immutable")

    def __repr__(self):
        return f"<{type(self).__name__} {render(self)}>"


class Atom(FeatureStructure):
    """An atomic value; no outgoing features."""

    __slots__ = ("value",)

    def __init__(self, value: str, sort: str = TOP):
        super().__init__(sort)
        if not isinstance(value, str) or not value:
            raise StructuralError(f"bad atom value: {value!r}")
        object.__setattr__(self, "value", value)


class Node(FeatureStructure):
    """A complex node: a map from feature names to daughter structures.

    An empty node constrains nothing but its sort and unifies with any
    kind of partner; this is the 'top-rooted empty structure'.
    """

    __slots__ = ("_features",)

    def __init__(
        self,
        sort: str = TOP,
        features: Union[Mapping[str, FeatureStructure], Iterable[tuple[str, FeatureStructure]]] = (),
    ):
        super().__init__(sort)
        if isinstance(features, Mapping):
            pairs = list(features.items())
        else:
            pairs = list(features)
        pairs.sort(key=lambda kv: kv[0])
        names = [name for name, _ in pairs]
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate feature names: {names}")
        for name, child in pairs:
            if not isinstance(child, FeatureStructure):
                raise StructuralError(f"feature {name!r} has a non-structure value")
            if isinstance(child, SetNode) and name not in SET_VALUED_FEATURES:
                raise StructuralError(f"feature {name!r} may not be set-valued")
        object.__setattr__(self, "_features", tuple(pairs))

    @property
    def features(self) -> tuple[tuple[str, FeatureStructure], ...]:
        return self._features

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self._features)

    def get(self, name: str) -> Optional[FeatureStructure]:
        for fname, child in self._features:
            if fname == name:
                return child
        return None

    def is_empty(self) -> bool:
        return not self._features


class SetNode(FeatureStructure):
    """A finite set of structures; the value of a set-valued feature."""

    __slots__ = ("members",)

    def __init__(self, members: Iterable[FeatureStructure] = (), sort: str = TOP):
        super().__init__(sort)
        members = tuple(members)
        for m in members:
            if not isinstance(m, FeatureStructure):
                raise StructuralError("set member is not a structure")
            if isinstance(m, SetNode):
                raise StructuralError("set nodes may not be nested")
        object.__setattr__(self, "members", members)


def empty(sort: str = TOP) -> Node:
    return Node(sort)


Path = tuple  # a sequence of feature names; the empty path is the root


def path_value(fs: FeatureStructure, path: Iterable[str]) -> Optional[FeatureStructure]:
    """Node reached by following ``path`` from ``fs``; None when absent."""
    node = fs
    for name in path:
        if not isinstance(node, Node):
            return None
        node = node.get(name)
        if node is None:
            return None
    return node


def iter_nodes(fs: FeatureStructure) -> Iterator[FeatureStructure]:
    """Every distinct node reachable from ``fs``, depth first."""
    seen: set[int] = set()

    def walk(n: FeatureStructure) -> Iterator[FeatureStructure]:
        if id(n) in seen:
            return
        seen.add(id(n))
        yield n
        if isinstance(n, Node):
            for _, child in n.features:
                yield from walk(child)
        elif isinstance(n, SetNode):
            for m in n.members:
                yield from walk(m)

    return walk(fs)


def node_count(fs: FeatureStructure) -> int:
    return sum(1 for _ in iter_nodes(fs))


def replace_nodes(
    root: FeatureStructure,
    replacements: Mapping[int, FeatureStructure],
) -> FeatureStructure:
    """Copy of ``root`` with nodes swapped by identity.

    ``replacements`` maps ``id(old_node)`` to its substitute; substitutes
    are inserted as-is (not copied).  Sharing among untouched nodes is
    preserved, and untouched subgraphs are reused rather than copied.
    """
    memo: dict[int, FeatureStructure] = {}

    def rebuild(n: FeatureStructure) -> FeatureStructure:
        if id(n) in replacements:
            return replacements[id(n)]
        got = memo.get(id(n))
        if got is not None:
            return got
        if isinstance(n, Atom):
            result: FeatureStructure = n
        elif isinstance(n, SetNode):
            members = [rebuild(m) for m in n.members]
            if all(new is old for new, old in zip(members, n.members)):
                result = n
            else:
                result = SetNode(members, n.sort)
        else:
            children = {name: rebuild(c) for name, c in n.features}
            if all(children[name] is c for name, c in n.features):
                result = n
            else:
                result = Node(n.sort, children)
        memo[id(n)] = result
        return result

    return rebuild(root)


# ---------------------------------------------------------------------------
# Rendering


def _skeleton(n: FeatureStructure, memo: dict[int, str]) -> str:
    """Tag-free structural key; used only to order set members stably."""
    got = memo.get(id(n))
    if got is not None:
        return got
    if isinstance(n, Atom):
        s = f"{n.value}^{n.sort}"
    elif isinstance(n, SetNode):
        inner = sorted(_skeleton(m, memo) for m in n.members)
        s = "{" + " ".join(inner) + "}^" + n.sort
    else:
        inner = " ".join(
            f"{name}:{_skeleton(c, memo)}" for name, c in n.features
        )
        s = f"[{n.sort} {inner}]"
    memo[id(n)] = s
    return s


def _ordered_children(n: FeatureStructure, skel: dict[int, str]) -> list[FeatureStructure]:
    if isinstance(n, Node):
        return [child for _, child in n.features]
    if isinstance(n, SetNode):
        return sorted(n.members, key=lambda m: _skeleton(m, skel))
    return []


def render(fs: FeatureStructure) -> str:
    """Stable textual form: ``[sort FEAT: value ...]`` with ``#n`` tags."""
    skel: dict[int, str] = {}
    counts: dict[int, int] = {}

    def count(n: FeatureStructure) -> None:
        c = counts.get(id(n), 0)
        counts[id(n)] = c + 1
        if c:
            return
        for child in _ordered_children(n, skel):
            count(child)

    count(fs)

    tags: dict[int, int] = {}
    emitted: set[int] = set()

    def emit(n: FeatureStructure) -> str:
        prefix = ""
        if counts[id(n)] > 1:
            if id(n) in emitted:
                return f"#{tags[id(n)]}"
            tags[id(n)] = len(tags) + 1
            prefix = f"#{tags[id(n)]}="
        emitted.add(id(n))
        if isinstance(n, Atom):
            body = n.value if n.sort == TOP else f"{n.value}^{n.sort}"
        elif isinstance(n, SetNode):
            body = "{" + ", ".join(emit(m) for m in _ordered_children(n, skel)) + "}"
        else:
            parts = [n.sort]
            for name, child in n.features:
                parts.append(f"{name}: {emit(child)}")
            body = "[" + " ".join(parts) + "]"
        return prefix + body

    return emit(fs)


# ---------------------------------------------------------------------------
# Structural equality (graph isomorphism up to tag renaming)


def struct_equal(a: FeatureStructure, b: FeatureStructure) -> bool:
    """True iff ``a`` and ``b`` are isomorphic as tagged graphs."""
    fwd: dict[int, FeatureStructure] = {}
    bwd: dict[int, FeatureStructure] = {}

    def walk(x: FeatureStructure, y: FeatureStructure) -> bool:
        if id(x) in fwd:
            return fwd[id(x)] is y and bwd[id(y)] is x
        if id(y) in bwd:
            return False
        if type(x) is not type(y) or x.sort != y.sort:
            return False
        fwd[id(x)] = y
        bwd[id(y)] = x
        if isinstance(x, Atom):
            return x.value == y.value
        if isinstance(x, Node):
            if x.feature_names != y.feature_names:
                return False
            return all(walk(cx, cy) for (_, cx), (_, cy) in zip(x.features, y.features))
        assert isinstance(x, SetNode) and isinstance(y, SetNode)
        if len(x.members) != len(y.members):
            return False
        return _match_members(list(x.members), list(y.members), walk, fwd, bwd)

    return walk(a, b)


def _match_members(xs, ys, walk, fwd, bwd) -> bool:
    """Backtracking bijection between set members under a shared node map."""
    if not xs:
        return True
    x = xs[0]
    for i, y in enumerate(ys):
        saved_f, saved_b = dict(fwd), dict(bwd)
        if walk(x, y) and _match_members(xs[1:], ys[:i] + ys[i + 1 :], walk, fwd, bwd):
            return True
        fwd.clear()
        fwd.update(saved_f)
        bwd.clear()
        bwd.update(saved_b)
    return False


# ---------------------------------------------------------------------------
# Subsumption


def subsumes(
    a: FeatureStructure,
    b: FeatureStructure,
    sorts: SortHierarchy = TRIVIAL_SORTS,
) -> bool:
    """True iff every path, value and coindexation constraint of ``a`` holds in ``b``.

    Set values follow union semantics: each member of ``a``'s set must
    coincide (in context, sharing included) with a member of ``b``'s.
    """
    fwd: dict[int, FeatureStructure] = {}

    def walk(x: FeatureStructure, y: FeatureStructure, exact: bool) -> bool:
        prior = fwd.get(id(x))
        if prior is not None:
            return prior is y
        fwd[id(x)] = y
        if exact:
            if type(x) is not type(y) or x.sort != y.sort:
                return False
        else:
            if not sorts.is_sub(y.sort, x.sort):
                return False
        if isinstance(x, Atom):
            return isinstance(y, Atom) and y.value == x.value
        if isinstance(x, Node):
            if x.is_empty() and not exact:
                return True
            if not isinstance(y, Node):
                return False
            if exact and x.feature_names != y.feature_names:
                return False
            for name, cx in x.features:
                cy = y.get(name)
                if cy is None or not walk(cx, cy, exact):
                    return False
            return True
        if not isinstance(y, SetNode):
            return False
        # each member of x must contextually equal some member of y

        def eq_walk(m, n):
            return walk(m, n, True)

        return _match_into(list(x.members), list(y.members), eq_walk, fwd)

    return walk(a, b, False)


def _match_into(xs, ys, walk, fwd) -> bool:
    """Backtracking injective match of xs into ys (map-consistent)."""
    if not xs:
        return True
    x = xs[0]
    for i, y in enumerate(ys):
        saved = dict(fwd)
        if walk(x, y) and _match_into(xs[1:], ys[:i] + ys[i + 1 :], walk, fwd):
            return True
        fwd.clear()
        fwd.update(saved)
    return False


# ---------------------------------------------------------------------------
# Unification


class _Class:
    """Union-find payload: the constraints accumulated for one node class."""

    __slots__ = ("sort", "atom", "features", "members", "is_set", "nonempty")

    def __init__(self, node: FeatureStructure):
        self.sort = node.sort
        self.atom = node.value if isinstance(node, Atom) else None
        self.features: dict[str, FeatureStructure] = {}
        self.members: list[FeatureStructure] = []
        self.is_set = isinstance(node, SetNode)
        self.nonempty = False
        if isinstance(node, Node):
            self.features = dict(node.features)
            self.nonempty = bool(node.features)
        elif isinstance(node, SetNode):
            self.members = list(node.members)


def unify(
    a: FeatureStructure,
    b: FeatureStructure,
    sorts: SortHierarchy = TRIVIAL_SORTS,
) -> Optional[FeatureStructure]:
    """Most general structure subsumed by both inputs, or None.

    Tag identity merges node identity: wherever either input shares a
    node between two paths, the result shares one node too.  The sort of
    each merged node is the meet of the input sorts.  Returns ``None``
    exactly when an atomic clash or an empty sort meet makes the inputs
    incompatible; raises :class:`StructuralError` when the merged graph
    would be cyclic.
    """
    parent: dict[int, FeatureStructure] = {}
    data: dict[int, _Class] = {}

    def find(n: FeatureStructure) -> FeatureStructure:
        root = n
        while id(root) in parent:
            root = parent[id(root)]
        while id(n) in parent:  # path compression
            nxt = parent[id(n)]
            parent[id(n)] = root
            n = nxt
        if id(root) not in data:
            data[id(root)] = _Class(root)
        return root

    queue: list[tuple[FeatureStructure, FeatureStructure]] = [(a, b)]
    while queue:
        x, y = queue.pop()
        rx, ry = find(x), find(y)
        if rx is ry:
            continue
        dx, dy = data[id(rx)], data[id(ry)]
        sort = sorts.meet(dx.sort, dy.sort)
        if sort is None:
            return None
        if dx.atom is not None and dy.atom is not None and dx.atom != dy.atom:
            return None
        atom = dx.atom if dx.atom is not None else dy.atom
        is_set = dx.is_set or dy.is_set
        nonempty = dx.nonempty or dy.nonempty
        if atom is not None and (nonempty or is_set):
            return None
        if is_set and nonempty:
            return None
        merged = dict(dx.features)
        for name, child in dy.features.items():
            if name in merged:
                queue.append((merged[name], child))
            else:
                merged[name] = child
        parent[id(ry)] = rx
        dx.sort = sort
        dx.atom = atom
        dx.is_set = is_set
        dx.nonempty = nonempty
        dx.features = merged
        dx.members = dx.members + dy.members

    built: dict[int, FeatureStructure] = {}
    on_stack: set[int] = set()

    def build(n: FeatureStructure) -> FeatureStructure:
        root = find(n)
        got = built.get(id(root))
        if got is not None:
            return got
        if id(root) in on_stack:
            raise StructuralError("unification would create a cyclic structure")
        on_stack.add(id(root))
        d = data[id(root)]
        if d.atom is not None:
            result: FeatureStructure = Atom(d.atom, d.sort)
        elif d.is_set:
            result = SetNode([build(m) for m in d.members], d.sort)
        else:
            result = Node(d.sort, {name: build(c) for name, c in d.features.items()})
        on_stack.discard(id(root))
        built[id(root)] = result
        return result

    result = build(a)
    return _dedup_sets(result)


def _anchored_nodes(root: FeatureStructure) -> set[int]:
    """Nodes reachable from the root without crossing a set-member edge."""
    seen: set[int] = set()
    stack = [root]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        if isinstance(n, Node):
            stack.extend(child for _, child in n.features)
        # set members are deliberately not descended into
    return seen


def _members_equal(x, y, anchored) -> bool:
    """Contextual equality for set members: anchored nodes only by identity."""
    if x is y:
        return True
    if id(x) in anchored or id(y) in anchored:
        return False
    if type(x) is not type(y) or x.sort != y.sort:
        return False
    if isinstance(x, Atom):
        return x.value == y.value
    if isinstance(x, Node):
        if x.feature_names != y.feature_names:
            return False
        return all(
            _members_equal(cx, cy, anchored)
            for (_, cx), (_, cy) in zip(x.features, y.features)
        )
    return False


def _dedup_sets(root: FeatureStructure) -> FeatureStructure:
    """Collapse set members that impose identical constraints in context."""
    if not any(isinstance(n, SetNode) for n in iter_nodes(root)):
        return root
    anchored = _anchored_nodes(root)
    rebuilt: dict[int, FeatureStructure] = {}

    def rebuild(n: FeatureStructure) -> FeatureStructure:
        got = rebuilt.get(id(n))
        if got is not None:
            return got
        if isinstance(n, Atom):
            result: FeatureStructure = n
        elif isinstance(n, SetNode):
            kept: list[FeatureStructure] = []
            for m in n.members:
                if not any(_members_equal(m, k, anchored) for k in kept):
                    kept.append(m)
            result = SetNode([rebuild(m) for m in kept], n.sort)
        else:
            children = {name: rebuild(c) for name, c in n.features}
            if all(children[name] is c for name, c in n.features):
                result = n
            else:
                result = Node(n.sort, children)
        rebuilt[id(n)] = result
        return result

    return rebuild(root)
