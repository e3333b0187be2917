"""Generates the syllabification golden set from the Hunspell en_US
hyphenation dictionary (via pyphen). Output is pasted into
tests/syllables_golden.inc; rerun only when the word list changes."""
import pyphen

WORDS = """
presentation algorithm Subsequently information university communication
experiment technology important evaluation participant interface analysis
performance delivery audience different significant understanding development
computer interaction confidence expression language gesture microphone
prototype effective recognition synchronize support problem result method
system design student example document together remember however professor
conference material beautiful feedback practice comfortable
""".split()

dic = pyphen.Pyphen(lang="en_US")
assert len(WORDS) == 50, len(WORDS)
for w in WORDS:
    print(f'    {{"{w}", "{dic.inserted(w)}"}},')
