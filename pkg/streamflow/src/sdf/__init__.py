"""Synchronous Dataflow representation of a network mapped onto a design point."""
