"""Text format, workspace and command-line interface."""

from .parser import ParseError, parse_document, parse_sentence, parse_term, tokenize
from .printer import print_workspace
from .workspace import Workspace

__all__ = ["ParseError", "Workspace", "parse_document", "parse_sentence", "parse_term",
           "print_workspace", "tokenize"]
