"""indigo: an event-sourced engine for iterative human-AI plan optimization.

Participants score a plan on a quantized three-criterion schema, propose and
vote on concrete edits, adjust objective weights mid-session, and stop when a
windowed convergence criterion fires. Every session is an append-only journal
that replays to the exact live state.
"""

__version__ = "0.1.0"
