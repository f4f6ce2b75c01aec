#pragma once

// Versioned prompt template assets. Nothing but template text lives in this
// header so that any prompt change shows up as a plain-text diff.
//
// Placeholders use {name} syntax and are substituted by the renderer in
// prompts.hpp. The JSON-format stanzas spell out concretely the record shape
// that the tolerant extractor in extract.hpp expects back.

namespace gptlens::assets {

inline constexpr const char* kPromptAssetsVersion = "gptlens-prompts/1";

// --------------------------------------------------------------------------
// Auditor prompt (generation stage).
// --------------------------------------------------------------------------
inline constexpr const char* kAuditorTemplate =
    R"(You are a smart contract auditor, identify and explain severe vulnerabilities in the provided smart contract, ensuring they are real-world exploitable and beneficial to attackers. Include reasoning and corresponding function code as well. Output up to {m} most severe vulnerabilities. If no vulnerabilities are detected, output "null".

{contract_code}

Remember your output should adhere to the following format: {json_format}.)";

inline constexpr const char* kAuditorJsonFormat =
    R"([
    {
        "function_name": "<name of the vulnerable function>",
        "vulnerability": "<short name of the vulnerability>",
        "reasoning": "<why this is exploitable in the real world and how an attacker benefits>"
    }
])";

// --------------------------------------------------------------------------
// Critic prompt (discrimination stage). The score scale is announced here.
// --------------------------------------------------------------------------
inline constexpr const char* kCriticTemplate =
    R"(As a meticulous and harsh critic, your duty is to scrutinize the function and evaluate the identified vulnerabilities and reasonings with scores in terms of correctness, severity and profitability. Your criticism should include an explanation for your scoring.

{auditor_output}

Remember your output should adhere to the following format: {json_format}.)";

inline constexpr const char* kCriticJsonFormat =
    R"([
    {
        "function_name": "<function name of the vulnerability under review>",
        "criticism": "<your critical evaluation of the vulnerability and its reasoning>",
        "correctness": <integer score from 0 to 9>,
        "severity": <integer score from 0 to 9>,
        "profitability": <integer score from 0 to 9>
    }
])";

// Per-finding block embedded at {auditor_output}, one per finding in batch
// order. The critic scores positionally, one record per block.
inline constexpr const char* kCriticFindingTemplate =
    R"(Vulnerability {index}:
"function_name": "{function_name}",
"vulnerability": "{vulnerability}",
"reasoning": "{reasoning}",
"function_code":
{function_code})";

// --------------------------------------------------------------------------
// Close-ended paradigms.
// --------------------------------------------------------------------------
inline constexpr const char* kBinaryTemplate =
    R"(You are a smart contract auditor. Review the following smart contract code in detail. Is the contract vulnerable to {vul_type}? Reply with YES or NO only.

{contract_code})";

inline constexpr const char* kMulticlassTemplate =
    R"(You are a smart contract auditor. Here are {n} vulnerabilities: {vul_types}. Review the following smart contract code in detail. Use 0 or 1 to indicate the presence of specific types of vulnerabilities, such as {indicator_example}.

{contract_code})";

// --------------------------------------------------------------------------
// Plain open-ended paradigm (no format stanza, free-form answer).
// --------------------------------------------------------------------------
inline constexpr const char* kOpenEndedTemplate =
    R"(You are a smart contract auditor. Review the following smart contract code in detail and identify vulnerabilities within it.

{contract_code})";

}  // namespace gptlens::assets
