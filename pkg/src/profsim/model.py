"""Profiles, attribute schemas and the directed friendship graph.

Attribute values are plain Python objects: ``str`` for exact/text
attributes, ``float`` for numeric ones, ``frozenset[str]`` for tag sets and
``None`` for a missing value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

from .errors import GraphError, SchemaError

AttributeValue = Union[str, float, frozenset, None]


class AttributeKind(str, enum.Enum):
    EXACT = "exact"
    TEXT = "text"
    NUMERIC = "numeric"
    TAGS = "tag-set"

    @classmethod
    def parse(cls, name: str) -> "AttributeKind":
        aliases = {"tags": cls.TAGS, "tagset": cls.TAGS, "number": cls.NUMERIC}
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise SchemaError(f"unknown attribute kind {name!r}") from None


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: AttributeKind = AttributeKind.TEXT


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute list; positions define weight-vector slots."""

    entries: tuple[Attribute, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        for entry in self.entries:
            if not entry.name:
                raise SchemaError("attribute names must be non-empty")
            if entry.name in seen:
                raise SchemaError(f"duplicate attribute {entry.name!r} in schema")
            seen.add(entry.name)

    @classmethod
    def of(cls, *pairs: tuple[str, str]) -> "AttributeSchema":
        return cls(tuple(Attribute(n, AttributeKind.parse(k)) for n, k in pairs))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Attribute]:
        return iter(self.entries)

    def __contains__(self, name: object) -> bool:
        return any(e.name == name for e in self.entries)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def kind_of(self, name: str) -> AttributeKind:
        for entry in self.entries:
            if entry.name == name:
                return entry.kind
        raise SchemaError(f"attribute {name!r} is not in the schema")

    def with_kinds(self, overrides: Mapping[str, AttributeKind]) -> "AttributeSchema":
        for name in overrides:
            self.kind_of(name)
        return AttributeSchema(
            tuple(Attribute(e.name, overrides.get(e.name, e.kind)) for e in self.entries)
        )

    def check_value(self, name: str, value: AttributeValue) -> None:
        kind = self.kind_of(name)
        if value is None:
            return
        ok = {
            AttributeKind.EXACT: isinstance(value, str),
            AttributeKind.TEXT: isinstance(value, str),
            AttributeKind.NUMERIC: isinstance(value, (int, float)) and not isinstance(value, bool),
            AttributeKind.TAGS: isinstance(value, frozenset),
        }[kind]
        if not ok:
            raise SchemaError(
                f"attribute {name!r} is {kind.value} but got {type(value).__name__} {value!r}"
            )

    def validate(self, profile: "Profile") -> None:
        for name, value in profile.attributes.items():
            if name not in self:
                raise SchemaError(f"profile {profile.id!r}: attribute {name!r} is not in the schema")
            self.check_value(name, value)


@dataclass(frozen=True, eq=True)
class Profile:
    id: str
    display_name: str = ""
    attributes: Mapping[str, AttributeValue] = field(default_factory=dict)
    friends: frozenset = frozenset()
    communities: frozenset = frozenset()

    def __post_init__(self):
        if not self.id:
            raise GraphError("profile id must be non-empty")
        friends = frozenset(self.friends)
        if self.id in friends:
            raise GraphError(f"profile {self.id!r} lists itself as a friend")
        object.__setattr__(self, "friends", friends)
        object.__setattr__(self, "communities", frozenset(self.communities))
        object.__setattr__(self, "attributes", MappingProxyType(dict(self.attributes)))
        if not self.display_name:
            object.__setattr__(self, "display_name", self.id)

    __hash__ = None  # attributes mapping is not hashable

    def get(self, name: str) -> AttributeValue:
        return self.attributes.get(name)

    def replace(self, **changes) -> "Profile":
        current = dict(
            id=self.id,
            display_name=self.display_name,
            attributes=dict(self.attributes),
            friends=self.friends,
            communities=self.communities,
        )
        current.update(changes)
        return Profile(**current)


class SocialGraph:
    """Directed friendship graph; a profile's friends are its out-neighbours.

    The graph is immutable once built. Every friend id must be a node.
    """

    def __init__(self, profiles: Iterable[Profile]):
        nodes: dict[str, Profile] = {}
        for p in profiles:
            if p.id in nodes:
                raise GraphError(f"duplicate profile id {p.id!r}")
            nodes[p.id] = p
        for p in nodes.values():
            for f in sorted(p.friends):
                if f not in nodes:
                    raise GraphError(f"profile {p.id!r} has an edge to undeclared node {f!r}")
        self._nodes = nodes

    @classmethod
    def from_edges(cls, profiles: Iterable[Profile], edges: Iterable[tuple[str, str]]) -> "SocialGraph":
        profiles = list(profiles)
        out: dict[str, set[str]] = {p.id: set(p.friends) for p in profiles}
        for src, dst in edges:
            if src not in out:
                raise GraphError(f"edge from undeclared node {src!r}")
            out[src].add(dst)
        return cls(p.replace(friends=frozenset(out[p.id])) for p in profiles)

    def __contains__(self, pid: object) -> bool:
        return pid in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[Profile]:
        return iter(self._nodes.values())

    @property
    def ids(self) -> list[str]:
        return list(self._nodes)

    @property
    def edges(self) -> set[tuple[str, str]]:
        return {(p.id, f) for p in self._nodes.values() for f in p.friends}

    def profile(self, pid: str) -> Profile:
        try:
            return self._nodes[pid]
        except KeyError:
            raise GraphError(f"unknown profile id {pid!r}") from None

    def friends(self, pid: str) -> frozenset:
        return self.profile(pid).friends

    def symmetrized(self) -> "SocialGraph":
        """Copy of the graph with every edge made bidirectional."""
        back: dict[str, set[str]] = {pid: set() for pid in self._nodes}
        for src, dst in self.edges:
            back[dst].add(src)
        return SocialGraph(p.replace(friends=p.friends | back[p.id]) for p in self)

    def with_profiles(self, profiles: Iterable[Profile]) -> "SocialGraph":
        """Replace node payloads, keeping edges as they are."""
        updated = dict(self._nodes)
        for p in profiles:
            if p.id not in updated:
                raise GraphError(f"profile {p.id!r} is not a node of the graph")
            updated[p.id] = p.replace(friends=self._nodes[p.id].friends)
        return SocialGraph(updated.values())


def mutual_friends(graph: SocialGraph, u: str, v: str) -> frozenset:
    """Friends shared by ``u`` and ``v``, never including ``u`` or ``v`` themselves."""
    return (graph.friends(u) & graph.friends(v)) - {u, v}


def mutual_communities(u: Profile, v: Profile) -> frozenset:
    return u.communities & v.communities

