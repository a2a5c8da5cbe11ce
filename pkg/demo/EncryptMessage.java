import java.nio.charset.StandardCharsets;
import java.security.SecureRandom;
import java.util.Arrays;

import javax.crypto.Cipher;
import javax.crypto.spec.GCMParameterSpec;
import javax.crypto.spec.SecretKeySpec;

/*?
anchor: EncryptMessage
title: Encrypting one message

AES-GCM in five statements: draw key material, build the key object, pick a
fresh IV, configure the cipher, encrypt. Each statement carries its own note;
the walkthrough visits them in order.
*/
public class EncryptMessage {

    static final int GCM_TAG_BITS = 128;
    static final int IV_BYTES = 12;

    public static byte[] encrypt(String message) throws Exception {
        /*?
        anchor: SecureRandom
        step: 1
        title: Why SecureRandom and not Random

        `java.util.Random` is predictable: a handful of observed outputs is
        enough to reconstruct its internal state. Encryption needs an
        *unpredictable* source, which this class provides by drawing from the
        operating system's entropy pool.

        ---
        within: unpredictable
        id: entropy
        title: Unpredictability

        No efficient algorithm should be able to tell the generator's output
        apart from uniform noise, even after seeing earlier outputs.
        */
        SecureRandom random = new SecureRandom();

        /*?
        anchor: keyBytes
        step: 2
        title: Key material

        256 random bits, wrapped into a key object the cipher accepts. The
        raw array is cleared once the key object exists; see the note on the
        last statement.
        */
        byte[] keyBytes = new byte[32];
        random.nextBytes(keyBytes);
        SecretKeySpec key = new SecretKeySpec(keyBytes, "AES");

        byte[] iv = new byte[IV_BYTES];
        random.nextBytes(iv);

        /*?
        block: 3
        step: 3
        title: Encrypting with AES-GCM

        GCM both encrypts and authenticates. The IV must never repeat under
        the same key, and the authentication tag lets the receiver detect
        tampering before trusting a single byte of plaintext.
        */
        Cipher cipher = Cipher.getInstance("AES/GCM/NoPadding");
        cipher.init(Cipher.ENCRYPT_MODE, key, new GCMParameterSpec(GCM_TAG_BITS, iv));
        byte[] ciphertext = cipher.doFinal(message.getBytes(StandardCharsets.UTF_8));

        /*?
        anchor: fill
        include: zeroing-arrays
        */
        Arrays.fill(keyBytes, (byte) 0);
        return ciphertext;
    }
}
