package main

import (
	"bufio"
	"fmt"
	"os"
	"sort"
	"strings"
)

func countWords(scanner *bufio.Scanner) map[string]int {
	counts := make(map[string]int)
	for scanner.Scan() {
		for _, word := range strings.Fields(scanner.Text()) {
			word = strings.ToLower(strings.Trim(word, ".,;:!?\"'"))
			if word == "" {
				continue
			}
			counts[word]++
		}
	}
	return counts
}

func topN(counts map[string]int, n int) []string {
	words := make([]string, 0, len(counts))
	for w := range counts {
		words = append(words, w)
	}
	sort.Slice(words, func(i, j int) bool {
		if counts[words[i]] != counts[words[j]] {
			return counts[words[i]] > counts[words[j]]
		}
		return words[i] < words[j]
	})
	if len(words) > n {
		words = words[:n]
	}
	return words
}

func main() {
	counts := countWords(bufio.NewScanner(os.Stdin))
	for _, w := range topN(counts, 10) {
		fmt.Printf("%7d %s\n", counts[w], w)
	}
}
