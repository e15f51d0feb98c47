"""Named collections of signatures, morphisms, models, theories and spans."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..signature import HFOLSignature, SignatureExtension, SignatureMorphism
from ..semantics.kripke import KripkeStructure
from ..squares import Span


@dataclass
class Workspace:
    signatures: dict[str, HFOLSignature] = field(default_factory=dict)
    extensions: dict[str, SignatureExtension] = field(default_factory=dict)
    extension_bases: dict[str, str] = field(default_factory=dict)
    morphisms: dict[str, SignatureMorphism] = field(default_factory=dict)
    morphism_ends: dict[str, tuple[str, str]] = field(default_factory=dict)
    models: dict[str, KripkeStructure] = field(default_factory=dict)
    model_signatures: dict[str, str] = field(default_factory=dict)
    theories: dict[str, tuple] = field(default_factory=dict)
    theory_signatures: dict[str, str] = field(default_factory=dict)
    spans: dict[str, dict[str, str]] = field(default_factory=dict)
    # where each name was declared, for diagnostics; ignored by equality
    locations: dict[str, tuple[int, int]] = field(default_factory=dict, compare=False)

    def has(self, name: str) -> bool:
        return any(name in table for table in (self.signatures, self.extensions, self.morphisms,
                                               self.models, self.theories, self.spans))

    def signature(self, name: str) -> HFOLSignature | None:
        if name in self.signatures:
            return self.signatures[name]
        if name in self.extensions:
            return self.extensions[name].signature
        return None

    def signature_name(self, sig: HFOLSignature) -> str | None:
        """The first declared name of a signature equal to ``sig``."""
        for name, s in self.signatures.items():
            if s == sig:
                return name
        for name, ext in self.extensions.items():
            if ext.signature == sig:
                return name
        return None

    def span(self, name: str) -> Span:
        fields = self.spans[name]
        return Span(self.morphisms[fields["left"]], self.morphisms[fields["right"]],
                    self.theories.get(fields.get("base", ""), ()),
                    self.theories.get(fields.get("left_theory", ""), ()),
                    self.theories.get(fields.get("right_theory", ""), ()))

    def is_empty(self) -> bool:
        return not self.has_any()

    def has_any(self) -> bool:
        return bool(self.signatures or self.extensions or self.morphisms or self.models
                    or self.theories or self.spans)
